//! Real-root isolation, refinement, and floating-point complex roots.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::poly::{eval_complex_coeffs, Poly};
use super::rational::{from_f64, ratio, to_f64, Rational};
use super::sturm::{Bound, SturmChain};
use crate::error::{QesError, Result};

/// Absolute tolerance used by [`refine_root`] callers that have no better idea.
pub const DEFAULT_REFINE_TOL: f64 = 1e-12;
/// Scaled residual accepted by [`complex_roots`].
pub const DEFAULT_COMPLEX_TOL: f64 = 1e-10;

const MAX_REFINE_ITERATIONS: usize = 4000;
const MAX_SCHUR_ITERATIONS: usize = 10_000;

/// Interval `(lo, hi]` holding exactly one distinct real root; `lo == hi`
/// marks a root known exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
}

impl IsolatingInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootIsolation {
    /// Sorted ascending, pairwise disjoint.
    pub intervals: Vec<IsolatingInterval>,
    /// Number of distinct real roots.
    pub real_count: usize,
}

impl RootIsolation {
    pub fn real_multiplicity(&self) -> usize {
        self.intervals.iter().map(|i| i.multiplicity).sum()
    }
}

/// Isolates every real root of `p` by Sturm-guided bisection of `(-B, B]`,
/// `B` a certified power-of-two root bound.
pub fn isolate_real_roots(p: &Poly) -> Result<RootIsolation> {
    let chain = SturmChain::new(p)?;
    let sf = chain.head().clone();
    if sf.degree() == Some(0) {
        return Ok(RootIsolation {
            intervals: Vec::new(),
            real_count: 0,
        });
    }
    let bound = sf.root_bound()?;
    let lo = -bound.clone();
    let total = chain.count(&Bound::Finite(lo.clone()), &Bound::Finite(bound.clone()))?;

    let mut found: Vec<(Rational, Rational)> = Vec::with_capacity(total);
    let mut stack = vec![(lo, bound, total)];
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => {}
            1 => found.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) * ratio(1, 2);
                let left = chain.count(&Bound::Finite(lo.clone()), &Bound::Finite(mid.clone()))?;
                stack.push((mid.clone(), hi, n - left));
                stack.push((lo, mid, left));
            }
        }
    }

    let mut intervals = Vec::with_capacity(found.len());
    for (mut lo, mut hi) in found {
        if sf.eval(&hi).is_zero() {
            lo = hi.clone();
        } else {
            // a root sitting on `lo` belongs to the neighbour; pull `lo` inward
            while sf.eval(&lo).is_zero() {
                let mid = (&lo + &hi) * ratio(1, 2);
                let right = chain.count(&Bound::Finite(mid.clone()), &Bound::Finite(hi.clone()))?;
                if right == 1 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        intervals.push(IsolatingInterval {
            lo,
            hi,
            multiplicity: 1,
        });
    }
    intervals.sort_by(|a, b| a.lo.cmp(&b.lo));

    let factors = p.squarefree_decomposition();
    if factors.len() > 1 {
        for iv in &mut intervals {
            iv.multiplicity = multiplicity_in(&factors, iv)?;
        }
    }
    Ok(RootIsolation {
        real_count: intervals.len(),
        intervals,
    })
}

fn multiplicity_in(factors: &[Poly], iv: &IsolatingInterval) -> Result<usize> {
    for (i, f) in factors.iter().enumerate() {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        let hit = if iv.is_exact() {
            f.eval(&iv.hi).is_zero()
        } else {
            SturmChain::new(f)?.count(&Bound::Finite(iv.lo.clone()), &Bound::Finite(iv.hi.clone()))? > 0
        };
        if hit {
            return Ok(i + 1);
        }
    }
    Err(QesError::InvalidInterval(
        "interval matches no squarefree factor".into(),
    ))
}

/// Exact bisection of an isolating interval of the squarefree `sf` down to `width`.
pub fn narrow_interval(
    sf: &Poly,
    lo: &Rational,
    hi: &Rational,
    width: &Rational,
) -> Result<(Rational, Rational)> {
    if lo > hi {
        return Err(QesError::InvalidInterval("lo > hi".into()));
    }
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    if lo == hi || sf.eval(&hi).is_zero() {
        return Ok((hi.clone(), hi));
    }
    let s_lo = sf.eval(&lo);
    let s_hi = sf.eval(&hi);
    if s_lo.is_zero() || s_lo.is_positive() == s_hi.is_positive() {
        return Err(QesError::InvalidInterval(
            "endpoints do not bracket a sign change".into(),
        ));
    }
    let lo_positive = s_lo.is_positive();
    let half = ratio(1, 2);
    let mut iterations = 0;
    while &hi - &lo > *width {
        iterations += 1;
        if iterations > MAX_REFINE_ITERATIONS {
            return Err(QesError::RefinementStalled { iterations });
        }
        let mid = (&lo + &hi) * &half;
        let v = sf.eval(&mid);
        if v.is_zero() {
            return Ok((mid.clone(), mid));
        }
        if v.is_positive() == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Approximates the root isolated by `(lo, hi]` to within `tol`.
pub fn refine_root(p: &Poly, interval: (&Rational, &Rational), tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(QesError::RefinementStalled { iterations: 0 });
    }
    let sf = p.squarefree_part();
    let width = from_f64(tol).expect("finite tolerance");
    let (lo, hi) = narrow_interval(&sf, interval.0, interval.1, &width)?;
    let mid = to_f64(&((&lo + &hi) * ratio(1, 2)));
    if lo == hi {
        return Ok(mid);
    }
    // one Newton step in floating point, kept only if it stays inside the bracket
    let d = sf.derivative();
    let fx = sf.eval_f64(mid);
    let dfx = d.eval_f64(mid);
    if dfx != 0.0 && dfx.is_finite() && fx.is_finite() {
        let polished = mid - fx / dfx;
        if polished >= to_f64(&lo) && polished <= to_f64(&hi) {
            return Ok(polished);
        }
    }
    Ok(mid)
}

/// Backward-error residual `|p(z)| / sum |c_k| |z|^k`.
pub fn scaled_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let num = eval_complex_coeffs(coeffs, z).norm();
    let r = z.norm();
    let den = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs());
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// All complex roots of `p` from the eigenvalues of its balanced companion
/// matrix, each polished by Newton's method.
pub fn complex_roots(p: &Poly, tol: f64) -> Result<Vec<Complex64>> {
    let n = p.degree().ok_or(QesError::ZeroPolynomial)?;
    if n == 0 {
        return Err(QesError::ConstantPolynomial);
    }
    let monic = p.monic();
    let coeffs = monic.to_f64_coeffs();
    let not_converged = |iterations| QesError::RootsNotConverged {
        poly: p.to_string(),
        iterations,
    };

    // leading zero roots are split off exactly
    let zeros = monic.coeffs().iter().take_while(|c| c.is_zero()).count();
    let reduced = &coeffs[zeros..];
    let m = n - zeros;

    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if m == 1 {
        roots.push(Complex64::new(-reduced[0], 0.0));
    } else if m > 1 {
        let mut companion = DMatrix::<f64>::zeros(m, m);
        for i in 1..m {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..m {
            companion[(i, m - 1)] = -reduced[i];
        }
        balance(&mut companion);
        let schur = Schur::try_new(companion, f64::EPSILON, MAX_SCHUR_ITERATIONS)
            .ok_or_else(|| not_converged(MAX_SCHUR_ITERATIONS))?;
        roots.extend(schur.complex_eigenvalues().iter().copied());
    }

    let dcoeffs: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let f = eval_complex_coeffs(&coeffs, *z);
            let df = eval_complex_coeffs(&dcoeffs, *z);
            if df.norm() == 0.0 || !df.is_finite() {
                break;
            }
            let next = *z - f / df;
            if next.is_finite() && scaled_residual(&coeffs, next) < scaled_residual(&coeffs, *z) {
                *z = next;
            } else {
                break;
            }
        }
    }

    for z in &roots {
        let r = scaled_residual(&coeffs, *z);
        if r.is_nan() || r >= tol {
            return Err(not_converged(MAX_SCHUR_ITERATIONS));
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Parlett–Reinsch diagonal balancing with power-of-two scalings.
fn balance(m: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    const RADIX_SQ: f64 = RADIX * RADIX;
    let n = m.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                c += m[(j, i)].abs();
                r += m[(i, j)].abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / RADIX {
                f *= RADIX;
                c *= RADIX_SQ;
            }
            while c > r * RADIX {
                f /= RADIX;
                c /= RADIX_SQ;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Number of roots off the real axis as seen by the exact real-root count.
pub fn nonreal_root_count(p: &Poly) -> Result<usize> {
    let n = p.degree().ok_or(QesError::ZeroPolynomial)?;
    Ok(n - isolate_real_roots(p)?.real_multiplicity())
}
