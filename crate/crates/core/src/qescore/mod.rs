//! The QES block of the quartic family.
//!
//! Substituting `psi = exp(-ix^3/3 - ax^2/2 - ibx) P(x)` with `P` a monic
//! polynomial of degree `J - 1` turns the Schrödinger equation into a finite
//! linear recursion on the coefficients of `P`. Rescaling `c_m = i^m d_m`
//! makes every entry real, so the whole pipeline runs over the rationals.

pub mod reference;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{QesError, Result};
use crate::linalg::Matrix;
use crate::ratpoly::{
    complex_roots, isolate_real_roots, rat, refine_root, Poly, Rational, RootIsolation,
    DEFAULT_COMPLEX_TOL,
};

pub use reference::{reference_polynomial, Form, ReferencePolynomial};

/// One Hamiltonian of the family: block size `J` and couplings `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuarticSpec {
    j: u32,
    a: Rational,
    b: Rational,
}

impl QuarticSpec {
    pub fn new(j: u32, a: Rational, b: Rational) -> Result<Self> {
        if j == 0 {
            return Err(QesError::InvalidParameter("J must be >= 1".into()));
        }
        Ok(QuarticSpec { j, a, b })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `K = 4b + a^2`.
    pub fn k(&self) -> Rational {
        rat(4) * &self.b + &self.a * &self.a
    }

    /// `b^2 + J a`, the offset between `E` and the reduced energy `F`.
    pub fn energy_shift(&self) -> Rational {
        &self.b * &self.b + rat(self.j as i64) * &self.a
    }

    pub fn reduced(&self) -> ReducedSpec {
        ReducedSpec {
            j: self.j,
            k: self.k(),
        }
    }
}

/// The one-parameter reduced problem `Q_J(F; K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedSpec {
    pub j: u32,
    pub k: Rational,
}

impl ReducedSpec {
    pub fn new(j: u32, k: Rational) -> Result<Self> {
        if j == 0 {
            return Err(QesError::InvalidParameter("J must be >= 1".into()));
        }
        Ok(ReducedSpec { j, k })
    }

    /// A concrete `(a, b)` realizing this `K`, with the given `a`.
    pub fn realize(&self, a: Rational) -> QuarticSpec {
        let b = (&self.k - &a * &a) / rat(4);
        QuarticSpec { j: self.j, a, b }
    }

    /// `Q_J(F; K)` computed through the operator at `a = 0`, `b = K/4`.
    pub fn char_poly(&self) -> Poly {
        let spec = self.realize(Rational::zero());
        to_reduced(&build_operator(&spec).char_poly(), &spec)
    }
}

/// Real J×J upper Hessenberg matrix whose eigenvalues are the QES energies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QesOperator {
    entries: Matrix<Rational>,
}

impl QesOperator {
    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn entries(&self) -> &Matrix<Rational> {
        &self.entries
    }

    pub fn trace(&self) -> Rational {
        self.entries.trace()
    }

    /// Monic `det(E I - op)`.
    pub fn char_poly(&self) -> Poly {
        Poly::new(self.entries.hessenberg_char_poly())
    }
}

/// Assembles the operator from the coefficient recursion
///
/// `2(m-J) d_{m-1} + (2am + b^2 + a) d_m - 2b(m+1) d_{m+1} + (m+2)(m+1) d_{m+2} = E d_m`.
pub fn build_operator(spec: &QuarticSpec) -> QesOperator {
    let j = spec.j as i64;
    let (a, b) = (&spec.a, &spec.b);
    let diag0 = b * b + a;
    let entries = Matrix::from_fn(spec.j as usize, |row, col| {
        let m = row as i64;
        match col as i64 - m {
            -1 => rat(2 * (m - j)),
            0 => rat(2 * m) * a + &diag0,
            1 => rat(-2 * (m + 1)) * b,
            2 => rat((m + 2) * (m + 1)),
            _ => Rational::zero(),
        }
    });
    QesOperator { entries }
}

/// Rewrites `p(E)` in the reduced variable: `p(F + b^2 + J a)`.
pub fn to_reduced(p: &Poly, spec: &QuarticSpec) -> Poly {
    p.shift(&spec.energy_shift())
}

/// The exactly computed QES block of one Hamiltonian.
#[derive(Clone, Debug)]
pub struct QesSpectrum {
    pub spec: QuarticSpec,
    /// `Q_J(E)`.
    pub char_poly: Poly,
    pub isolation: RootIsolation,
    /// Real eigenvalues ascending, repeated according to multiplicity.
    pub real_eigenvalues: Vec<f64>,
    /// One representative (positive imaginary part) per conjugate pair.
    pub complex_pairs: Vec<Complex64>,
}

impl QesSpectrum {
    /// Every eigenvalue, conjugates included, ordered by real then imaginary part.
    pub fn all(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self
            .real_eigenvalues
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .chain(self.complex_pairs.iter().flat_map(|z| [*z, z.conj()]))
            .collect();
        out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        out
    }

    pub fn is_all_real(&self) -> bool {
        self.complex_pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.real_eigenvalues.len() + 2 * self.complex_pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Roots of `Q_J(E)`, split into certified-real values and conjugate pairs.
pub fn qes_eigenvalues(spec: &QuarticSpec, tol: f64) -> Result<QesSpectrum> {
    let char_poly = build_operator(spec).char_poly();
    let (real_eigenvalues, complex_pairs, isolation) = split_roots(&char_poly, tol)?;
    Ok(QesSpectrum {
        spec: spec.clone(),
        char_poly,
        isolation,
        real_eigenvalues,
        complex_pairs,
    })
}

/// Real roots (with multiplicity) from exact isolation; the remaining
/// roots from the floating-point solver, paired by conjugation.
pub(crate) fn split_roots(
    p: &Poly,
    tol: f64,
) -> Result<(Vec<f64>, Vec<Complex64>, RootIsolation)> {
    let degree = p.degree().ok_or(QesError::ZeroPolynomial)?;
    let isolation = isolate_real_roots(p)?;
    let mut real = Vec::with_capacity(degree);
    for iv in &isolation.intervals {
        let x = refine_root(p, (&iv.lo, &iv.hi), tol)?;
        real.extend(std::iter::repeat_n(x, iv.multiplicity));
    }
    let nonreal = degree - real.len();
    let mut pairs = Vec::with_capacity(nonreal / 2);
    if nonreal > 0 {
        let mut roots = complex_roots(p, DEFAULT_COMPLEX_TOL)?;
        roots.sort_by(|a, b| b.im.abs().total_cmp(&a.im.abs()));
        pairs.extend(
            roots[..nonreal]
                .iter()
                .filter(|z| z.im > 0.0)
                .copied(),
        );
        if pairs.len() * 2 != nonreal {
            return Err(QesError::RootsNotConverged {
                poly: p.to_string(),
                iterations: 0,
            });
        }
        // average each member with its partner's conjugate
        let lower: Vec<Complex64> = roots[..nonreal].iter().filter(|z| z.im < 0.0).copied().collect();
        for z in pairs.iter_mut() {
            if let Some(w) = lower
                .iter()
                .min_by(|u, v| (u.conj() - *z).norm().total_cmp(&(v.conj() - *z).norm()))
            {
                *z = (*z + w.conj()) * 0.5;
            }
        }
        pairs.sort_by(|a, b| a.re.total_cmp(&b.re));
    }
    Ok((real, pairs, isolation))
}
