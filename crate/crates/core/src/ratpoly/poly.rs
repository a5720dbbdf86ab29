//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rat, to_f64, Rational};
use crate::error::{QesError, Result};

/// Polynomial with exact coefficients; `coeffs[k]` multiplies `x^k`.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and `degree == len - 1` otherwise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, power: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Poly::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Poly::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Divides by the absolute value of the leading coefficient; keeps signs.
    pub fn sign_normalized(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.abs().recip()),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_f64_coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        eval_complex_coeffs(&self.to_f64_coeffs(), z)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(QesError::DivisionByZero)?;
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return Ok((Poly::zero(), self.clone()));
        };
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        // primitive remainder sequence over the integers
        let (mut a, mut b) = (primitive_integers(self), primitive_integers(other));
        while !b.is_empty() {
            let (r, _) = pseudo_remainder(&a, &b);
            a = b;
            b = primitive(r);
        }
        from_integers(a).monic()
    }

    /// `self / gcd(self, self')`: same roots, each simple.
    pub fn squarefree_part(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd is nonzero").0.monic()
    }

    /// Yun's algorithm: returns monic `f_1, f_2, ...` with `self = c * prod f_i^i`.
    /// Entry `i - 1` holds the product of the roots of multiplicity exactly `i`.
    pub fn squarefree_decomposition(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let p = self.monic();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.div_rem(&a0).expect("nonzero").0;
        let c = dp.div_rem(&a0).expect("nonzero").0;
        let mut d = &c - &b.derivative();
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.div_rem(&a).expect("nonzero").0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            let c = d.div_rem(&a).expect("nonzero").0;
            d = &c - &b.derivative();
        }
        while out.last().is_some_and(|f| f.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    /// `self(inner(x))` by Horner's scheme over polynomials.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * inner) + &Poly::constant(c.clone()))
    }

    /// `self(x + shift)`.
    pub fn shift(&self, shift: &Rational) -> Poly {
        self.compose(&Poly::new(vec![shift.clone(), Rational::one()]))
    }

    /// Unique polynomial of degree `< xs.len()` through the given points
    /// (Newton divided differences).
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Result<Poly> {
        if xs.len() != ys.len() {
            return Err(QesError::InvalidParameter("interpolation needs matching lengths".into()));
        }
        let n = xs.len();
        let mut dd = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let den = &xs[i] - &xs[i - level];
                if den.is_zero() {
                    return Err(QesError::InvalidParameter("repeated interpolation node".into()));
                }
                dd[i] = (&dd[i] - &dd[i - 1]) / den;
            }
        }
        let mut out = Poly::zero();
        for i in (0..n).rev() {
            out = &(&out * &Poly::linear_root(&xs[i])) + &Poly::constant(dd[i].clone());
        }
        Ok(out)
    }

    /// Cauchy bound `1 + max |c_k / c_n|`: every root satisfies `|z| < bound`.
    pub fn cauchy_bound(&self) -> Result<Rational> {
        let lc = self.leading().ok_or(QesError::ZeroPolynomial)?;
        let n = self.coeffs.len() - 1;
        let max = self.coeffs[..n]
            .iter()
            .map(|c| (c / lc).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        Ok(Rational::one() + max)
    }

    /// A power of two `B` with `|c_n| B^n > sum_{k<n} |c_k| B^k`, so every root
    /// satisfies `|z| < B`. Starts from Fujiwara's estimate, which is usually far
    /// tighter than the Cauchy bound, and doubles until the inequality holds.
    pub fn root_bound(&self) -> Result<Rational> {
        let lc = self.leading().ok_or(QesError::ZeroPolynomial)?.abs();
        let n = self.coeffs.len() - 1;
        let log2_estimate = (1..=n)
            .map(|k| {
                let c = &self.coeffs[n - k];
                if c.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    to_f64(&(c.abs() / &lc)).log2() / k as f64
                }
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let mut exp = if log2_estimate.is_finite() {
            log2_estimate.ceil() as i64 + 1
        } else {
            0
        };
        loop {
            let b = if exp >= 0 {
                Rational::from_integer(BigInt::one() << exp as usize)
            } else {
                Rational::new(BigInt::one(), BigInt::one() << (-exp) as usize)
            };
            let tail = self.coeffs[..n]
                .iter()
                .rev()
                .fold(Rational::zero(), |acc, c| acc * &b + c.abs());
            let mut head = lc.clone();
            for _ in 0..n {
                head *= &b;
            }
            if head > tail || n == 0 {
                return Ok(b);
            }
            exp += 1;
        }
    }

    /// Renders with the given variable name, highest power first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 || !mag.is_one() {
                out.push_str(&super::rational::format_rational(&mag));
            }
            out.push_str(&mono);
        }
        out
    }
}

/// `p` times a positive rational, with coprime integer coefficients.
pub(crate) fn primitive_integers(p: &Poly) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    primitive(ints)
}

pub(crate) fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() && !content.is_one() {
        for c in v.iter_mut() {
            *c /= &content;
        }
    }
    v
}

/// Pseudo-remainder of `a` by `b`, together with the number of times `a`
/// was multiplied by the leading coefficient of `b`.
pub(crate) fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, u32) {
    let lb = b.last().expect("nonzero divisor");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut multiplications = 0;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &lr * bc;
        }
        multiplications += 1;
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    (r, multiplications)
}

pub(crate) fn from_integers(v: Vec<BigInt>) -> Poly {
    Poly::new(v.into_iter().map(Rational::from_integer).collect())
}

pub(crate) fn eval_complex_coeffs(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rational::ratio;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn subtraction_cancels_to_constant() {
        // (F^2 - K at K=1) - F^2
        let diff = &p(&[-1, 0, 1]) - &p(&[0, 0, 1]);
        assert_eq!(diff, p(&[-1]));
        assert_eq!(diff.degree(), Some(0));
    }

    #[test]
    fn product_matches_hand_expansion() {
        let sq = &p(&[2, 1]) * &p(&[2, 1]);
        assert_eq!(&sq * &p(&[-4, 1]), p(&[-16, -12, 0, 1]));
    }

    #[test]
    fn synthetic_division() {
        let (q, r) = p(&[-16, -12, 0, 1]).div_rem(&p(&[2, 1])).unwrap();
        assert_eq!(q, p(&[-8, -2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let err = p(&[1, 1]).div_rem(&Poly::zero()).unwrap_err();
        assert_eq!(err.to_string(), "division by zero polynomial");
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Poly::new(vec![rat(0), rat(0)]), Poly::zero());
        assert_eq!(Poly::zero().degree(), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = p(&[-16, -12, 0, 1]); // (F+2)^2 (F-4)
        assert_eq!(f.gcd(&f.derivative()), p(&[2, 1]));
        assert_eq!(f.squarefree_part(), p(&[-8, -2, 1]));
        let parts = f.squarefree_decomposition();
        assert_eq!(parts, vec![p(&[-4, 1]), p(&[2, 1])]);
    }

    #[test]
    fn yun_handles_higher_multiplicities() {
        // (x-1)^3 (x+1)
        let f = &(&(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-1, 1])) * &p(&[1, 1]);
        let parts = f.squarefree_decomposition();
        assert_eq!(parts, vec![p(&[1, 1]), Poly::one(), p(&[-1, 1])]);
    }

    #[test]
    fn shift_composes() {
        // (x+1)^2 shifted by -1 is x^2
        let f = p(&[1, 2, 1]);
        assert_eq!(f.shift(&rat(-1)), p(&[0, 0, 1]));
        assert_eq!(f.compose(&p(&[0, 0, 1])), p(&[1, 0, 2, 0, 1]));
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let f = p(&[3, 0, -2, 1]);
        let xs: Vec<Rational> = (0..5).map(|i| rat(i - 2)).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(Poly::interpolate(&xs, &ys).unwrap(), f);
        assert!(Poly::interpolate(&[rat(1), rat(1)], &[rat(0), rat(1)]).is_err());
    }

    #[test]
    fn root_bound_is_a_tight_power_of_two() {
        // roots -2 (double) and 4
        let f = Poly::from_ints(&[-16, -12, 0, 1]);
        let b = f.root_bound().unwrap();
        assert!(b > rat(4) && b <= rat(16), "{b}");
        assert_eq!(Poly::from_ints(&[7]).root_bound().unwrap(), rat(1));
        assert!(Poly::zero().root_bound().is_err());
    }

    #[test]
    fn cauchy_bound_contains_roots() {
        let f = p(&[-16, -12, 0, 1]);
        assert_eq!(f.cauchy_bound().unwrap(), rat(17));
        assert_eq!(Poly::new(vec![ratio(1, 2), rat(2)]).cauchy_bound().unwrap(), ratio(5, 4));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[-16, -12, 0, 1]).display_with("F"), "F^3 - 12F - 16");
        assert_eq!(Poly::new(vec![ratio(-1, 2), rat(-1)]).to_string(), "-x - 1/2");
    }
}
