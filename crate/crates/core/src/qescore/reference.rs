//! Closed forms of the QES polynomials, kept as test oracles.
//!
//! Raw form: `Q_J(E; a, b)` for `J <= 5`. Reduced form: `Q_J(F; K)` with
//! `E = F + b^2 + J a`, `K = 4b + a^2`, for `J <= 8`.

use num_traits::{Pow, Zero};

use crate::error::{QesError, Result};
use crate::ratpoly::{rat, Poly, Rational};

/// Which variables a reference polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// Energy `E` with parameters `a`, `b`.
    Raw,
    /// Reduced energy `F` with the single parameter `K`.
    Reduced,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::Raw => "raw",
            Form::Reduced => "reduced",
        }
    }
}

/// `(coefficient, power of E, power of a, power of b)`.
type RawTerm = (i64, u32, u32, u32);
/// `(coefficient, power of F, power of K)`.
type ReducedTerm = (i64, u32, u32);

const RAW: [&[RawTerm]; 5] = [
    &[(1, 1, 0, 0), (-1, 0, 0, 2), (-1, 0, 1, 0)],
    &[
        (1, 2, 0, 0),
        (-2, 1, 0, 2),
        (-4, 1, 1, 0),
        (1, 0, 0, 4),
        (4, 0, 1, 2),
        (-4, 0, 0, 1),
        (3, 0, 2, 0),
    ],
    &[
        (1, 3, 0, 0),
        (-3, 2, 0, 2),
        (-9, 2, 1, 0),
        (3, 1, 0, 4),
        (18, 1, 1, 2),
        (-16, 1, 0, 1),
        (23, 1, 2, 0),
        (-1, 0, 0, 6),
        (-9, 0, 1, 4),
        (16, 0, 0, 3),
        (-23, 0, 2, 2),
        (48, 0, 1, 1),
        (-15, 0, 3, 0),
        (-16, 0, 0, 0),
    ],
    &[
        (1, 4, 0, 0),
        (-4, 3, 0, 2),
        (-16, 3, 1, 0),
        (6, 2, 0, 4),
        (48, 2, 1, 2),
        (-40, 2, 0, 1),
        (86, 2, 2, 0),
        (-4, 1, 0, 6),
        (-48, 1, 1, 4),
        (80, 1, 0, 3),
        (-172, 1, 2, 2),
        (320, 1, 1, 1),
        (-176, 1, 3, 0),
        (-96, 1, 0, 0),
        (1, 0, 0, 8),
        (16, 0, 1, 6),
        (-40, 0, 0, 5),
        (86, 0, 2, 4),
        (-320, 0, 1, 3),
        (176, 0, 3, 2),
        (240, 0, 0, 2),
        (-568, 0, 2, 1),
        (105, 0, 4, 0),
        (384, 0, 1, 0),
    ],
    &[
        (1, 5, 0, 0),
        (-5, 4, 0, 2),
        (-25, 4, 1, 0),
        (10, 3, 0, 4),
        (100, 3, 1, 2),
        (-80, 3, 0, 1),
        (230, 3, 2, 0),
        (-10, 2, 0, 6),
        (-150, 2, 1, 4),
        (240, 2, 0, 3),
        (-690, 2, 2, 2),
        (1200, 2, 1, 1),
        (-950, 2, 3, 0),
        (-336, 2, 0, 0),
        (5, 1, 0, 8),
        (100, 1, 1, 6),
        (-240, 1, 0, 5),
        (690, 1, 2, 4),
        (-2400, 1, 1, 3),
        (1900, 1, 3, 2),
        (1696, 1, 0, 2),
        (-5488, 1, 2, 1),
        (1689, 1, 4, 0),
        (3360, 1, 1, 0),
        (-1, 0, 0, 10),
        (-25, 0, 1, 8),
        (80, 0, 0, 7),
        (-230, 0, 2, 6),
        (1200, 0, 1, 5),
        (-950, 0, 3, 4),
        (-1360, 0, 0, 4),
        (5488, 0, 2, 3),
        (-1689, 0, 4, 2),
        (-8480, 0, 1, 2),
        (7440, 0, 3, 1),
        (3072, 0, 0, 1),
        (-945, 0, 5, 0),
        (-7632, 0, 2, 0),
    ],
];

const REDUCED: [&[ReducedTerm]; 8] = [
    &[(1, 1, 0)],
    &[(1, 2, 0), (-1, 0, 1)],
    &[(1, 3, 0), (-4, 1, 1), (-16, 0, 0)],
    &[(1, 4, 0), (-10, 2, 1), (-96, 1, 0), (9, 0, 2)],
    &[(1, 5, 0), (-20, 3, 1), (-336, 2, 0), (64, 1, 2), (768, 0, 1)],
    &[
        (1, 6, 0),
        (-35, 4, 1),
        (-896, 3, 0),
        (259, 2, 2),
        (7040, 1, 1),
        (-225, 0, 3),
        (25600, 0, 0),
    ],
    &[
        (1, 7, 0),
        (-56, 5, 1),
        (-2016, 4, 0),
        (784, 3, 2),
        (35712, 2, 1),
        (-2304, 1, 3),
        (288000, 1, 0),
        (-55296, 0, 2),
    ],
    &[
        (1, 8, 0),
        (-84, 6, 1),
        (-4032, 5, 0),
        (1974, 4, 2),
        (132480, 3, 1),
        (-12916, 2, 3),
        (1760256, 2, 0),
        (-681408, 1, 2),
        (11025, 0, 4),
        (-6322176, 0, 1),
    ],
];

/// A stored closed-form polynomial, evaluable at exact parameter values.
#[derive(Clone, Copy, Debug)]
pub struct ReferencePolynomial {
    j: u32,
    form: Form,
}

/// Looks up `Q_J` in the requested form.
pub fn reference_polynomial(j: u32, form: Form) -> Result<ReferencePolynomial> {
    let available = match form {
        Form::Raw => RAW.len(),
        Form::Reduced => REDUCED.len(),
    };
    if j == 0 || j as usize > available {
        return Err(QesError::NoReferencePolynomial {
            j,
            form: form.name(),
        });
    }
    Ok(ReferencePolynomial { j, form })
}

impl ReferencePolynomial {
    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// `Q_J(E)` at the given `(a, b)`; raw form only.
    pub fn at_ab(&self, a: &Rational, b: &Rational) -> Result<Poly> {
        if self.form != Form::Raw {
            return Err(QesError::InvalidParameter(
                "reduced reference polynomials take K, not (a, b)".into(),
            ));
        }
        let mut coeffs = vec![Rational::zero(); self.j as usize + 1];
        for &(c, e, pa, pb) in RAW[self.j as usize - 1] {
            coeffs[e as usize] += rat(c) * Pow::pow(a, pa) * Pow::pow(b, pb);
        }
        Ok(Poly::new(coeffs))
    }

    /// `Q_J(F)` at the given `K`; reduced form only.
    pub fn at_k(&self, k: &Rational) -> Result<Poly> {
        if self.form != Form::Reduced {
            return Err(QesError::InvalidParameter(
                "raw reference polynomials take (a, b), not K".into(),
            ));
        }
        let mut coeffs = vec![Rational::zero(); self.j as usize + 1];
        for &(c, f, pk) in REDUCED[self.j as usize - 1] {
            coeffs[f as usize] += rat(c) * Pow::pow(k, pk);
        }
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::ratio;

    #[test]
    fn quartic_reduced_form() {
        let q4 = reference_polynomial(4, Form::Reduced).unwrap();
        // F^4 - 10K F^2 - 96F + 9K^2 at K = 2
        assert_eq!(q4.at_k(&rat(2)).unwrap(), Poly::from_ints(&[36, -96, -20, 0, 1]));
    }

    #[test]
    fn quintic_raw_at_origin() {
        let q5 = reference_polynomial(5, Form::Raw).unwrap();
        assert_eq!(
            q5.at_ab(&rat(0), &rat(0)).unwrap(),
            Poly::from_ints(&[0, 0, -336, 0, 0, 1])
        );
    }

    #[test]
    fn linear_raw_form() {
        let q1 = reference_polynomial(1, Form::Raw).unwrap();
        assert_eq!(q1.at_ab(&rat(1), &rat(2)).unwrap(), Poly::from_ints(&[-5, 1]));
        assert_eq!(
            q1.at_ab(&ratio(1, 2), &ratio(1, 3)).unwrap(),
            Poly::new(vec![ratio(-11, 18), rat(1)])
        );
    }

    #[test]
    fn out_of_range_is_an_error() {
        for (j, form) in [(6, Form::Raw), (9, Form::Reduced), (0, Form::Raw)] {
            let err = reference_polynomial(j, form).unwrap_err();
            assert!(err.to_string().contains("no reference polynomial"));
        }
    }

    #[test]
    fn forms_are_not_interchangeable() {
        let q2 = reference_polynomial(2, Form::Raw).unwrap();
        assert!(q2.at_k(&rat(1)).is_err());
    }
}
