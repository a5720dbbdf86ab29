//! The sl(2) generators acting on polynomials of degree `< J`, and the
//! gauge-rotated Hamiltonian written in terms of them:
//!
//! `h = -(J^-)^2 + 2i J^+ + 2a J^0 + 2ib J^- + b^2 + aJ`.
//!
//! Everything here is exact over the Gaussian rationals. Matrices act on
//! coefficient vectors in the monomial basis `{1, x, ..., x^{J-1}}`: column
//! `k` holds the image of `x^k`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::qescore::{build_operator, QuarticSpec};
use crate::ratpoly::{format_rational, rat, ratio, Poly, Rational};

/// `p + q i` with rational parts.
pub type GaussianRational = Complex<Rational>;

fn real(x: Rational) -> GaussianRational {
    Complex::new(x, Rational::zero())
}

fn imag(x: Rational) -> GaussianRational {
    Complex::new(Rational::zero(), x)
}

/// `i^power`.
fn i_pow(power: usize) -> GaussianRational {
    match power % 4 {
        0 => real(rat(1)),
        1 => imag(rat(1)),
        2 => real(rat(-1)),
        _ => imag(rat(-1)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    /// `x^2 d/dx - (J-1) x`.
    pub plus: Matrix<Rational>,
    /// `x d/dx - (J-1)/2`.
    pub zero: Matrix<Rational>,
    /// `d/dx`.
    pub minus: Matrix<Rational>,
}

pub fn build_generators(j: u32) -> GeneratorSet {
    let n = j as usize;
    let spin = ratio(j as i64 - 1, 2);
    let plus = Matrix::from_fn(n, |row, col| {
        if row == col + 1 {
            rat(col as i64 - (j as i64 - 1))
        } else {
            Rational::zero()
        }
    });
    let zero = Matrix::from_fn(n, |row, col| {
        if row == col {
            rat(col as i64) - &spin
        } else {
            Rational::zero()
        }
    });
    let minus = Matrix::from_fn(n, |row, col| {
        if col == row + 1 {
            rat(col as i64)
        } else {
            Rational::zero()
        }
    });
    GeneratorSet { plus, zero, minus }
}

/// `h` assembled from the generators.
pub fn build_algebraic_h(j: u32, a: &Rational, b: &Rational) -> Matrix<GaussianRational> {
    let g = build_generators(j);
    let lift = |m: &Matrix<Rational>| m.map(|x| real(x.clone()));
    let (plus, zero, minus) = (lift(&g.plus), lift(&g.zero), lift(&g.minus));
    let constant = b * b + a * rat(j as i64);
    minus
        .matmul(&minus)
        .scale(&real(rat(-1)))
        .add(&plus.scale(&imag(rat(2))))
        .add(&zero.scale(&real(rat(2) * a)))
        .add(&minus.scale(&imag(rat(2) * b)))
        .add(&Matrix::identity(j as usize).scale(&real(constant)))
}

/// `h = -d^2/dx^2 + (2ix^2 + 2ax + 2ib) d/dx - (2i(J-1)x - b^2 - a)` applied
/// term by term to each monomial.
pub fn differential_h(j: u32, a: &Rational, b: &Rational) -> Matrix<GaussianRational> {
    let n = j as usize;
    let mut m: Matrix<GaussianRational> = Matrix::zeros(n);
    let shift = b * b + a;
    for k in 0..n {
        let kr = rat(k as i64);
        let mut add = |power: usize, v: GaussianRational| {
            if power < n {
                let cur = m.get(power, k).clone();
                m.set(power, k, cur + v);
            } else {
                assert!(v.is_zero(), "h does not preserve the span at x^{k}");
            }
        };
        if k >= 2 {
            add(k - 2, real(-(&kr * rat(k as i64 - 1))));
        }
        if k >= 1 {
            add(k - 1, imag(rat(2) * b * &kr));
        }
        add(k, real(rat(2) * a * &kr + &shift));
        add(k + 1, imag(rat(2) * &kr - rat(2 * (j as i64 - 1))));
    }
    m
}

/// Outcome of comparing the algebraic and differential forms of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub holds: bool,
    /// First disagreeing entry, if any: `(row, col, what)`.
    pub mismatch: Option<(usize, usize, String)>,
}

/// Checks entrywise that the generator form of `h` equals the differential
/// operator, that conjugating by `diag(i^m)` gives the real QES operator,
/// and that the characteristic polynomials agree.
pub fn verify_equivalence(j: u32, a: &Rational, b: &Rational) -> Result<Equivalence> {
    let alg = build_algebraic_h(j, a, b);
    let diff = differential_h(j, a, b);
    if let Some((r, c)) = alg.first_mismatch(&diff) {
        return Ok(Equivalence {
            holds: false,
            mismatch: Some((
                r,
                c,
                format!(
                    "generator form {} vs differential form {}",
                    show(alg.get(r, c)),
                    show(diff.get(r, c))
                ),
            )),
        });
    }

    let spec = QuarticSpec::new(j, a.clone(), b.clone())?;
    let op = build_operator(&spec);
    let n = j as usize;
    // D^{-1} h D with D = diag(i^m): entry (r, c) picks up i^{c - r}
    let rotated = Matrix::from_fn(n, |r, c| alg.get(r, c) * i_pow((c + 4 * n - r) % 4));
    let lifted = op.entries().map(|x| real(x.clone()));
    if let Some((r, c)) = rotated.first_mismatch(&lifted) {
        return Ok(Equivalence {
            holds: false,
            mismatch: Some((
                r,
                c,
                format!(
                    "rotated h {} vs QES operator {}",
                    show(rotated.get(r, c)),
                    format_rational(op.entries().get(r, c))
                ),
            )),
        });
    }

    let cp = gaussian_char_poly(&alg);
    if cp.as_ref() != Some(&op.char_poly()) {
        return Ok(Equivalence {
            holds: false,
            mismatch: Some((0, 0, "characteristic polynomials differ".into())),
        });
    }
    Ok(Equivalence {
        holds: true,
        mismatch: None,
    })
}

/// Characteristic polynomial of a Gaussian-rational Hessenberg matrix, or
/// `None` when some coefficient has a nonzero imaginary part.
pub fn gaussian_char_poly(m: &Matrix<GaussianRational>) -> Option<Poly> {
    let coeffs = m.hessenberg_char_poly();
    coeffs
        .into_iter()
        .map(|c| c.im.is_zero().then_some(c.re))
        .collect::<Option<Vec<_>>>()
        .map(Poly::new)
}

fn show(z: &GaussianRational) -> String {
    format!("{} + {}i", format_rational(&z.re), format_rational(&z.im))
}

/// Spectrum of `J^0`: the diagonal, which must run from `-(J-1)/2` to
/// `(J-1)/2` in unit steps.
pub fn zero_generator_weights(g: &GeneratorSet) -> Vec<Rational> {
    (0..g.zero.dim()).map(|i| g.zero.get(i, i).clone()).collect()
}

/// Whether the three sl(2) relations hold exactly.
pub fn commutators_hold(g: &GeneratorSet) -> bool {
    let plus_ok = g.zero.commutator(&g.plus) == g.plus;
    let minus_ok = g.zero.commutator(&g.minus) == g.minus.scale(&rat(-1));
    let pm_ok = g.plus.commutator(&g.minus) == g.zero.scale(&rat(-2));
    plus_ok && minus_ok && pm_ok
}

/// `true` if every entry of the matrix is real.
pub fn is_real_matrix(m: &Matrix<GaussianRational>) -> bool {
    let n = m.dim();
    (0..n).all(|r| (0..n).all(|c| m.get(r, c).im.is_zero()))
}
