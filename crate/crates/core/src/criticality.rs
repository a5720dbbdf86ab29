//! The criticality surface: the smallest `K` for which all `J` roots of
//! `Q_J(F; K)` are real, and the double root `F` where the lowest two merge.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{QesError, Result};
use crate::qescore::{build_operator, ReducedSpec};
use crate::ratpoly::{
    from_f64, isolate_real_roots, rat, ratio, refine_root, round_dyadic, sturm_count, to_f64, Bound, Poly,
    Rational, SturmChain,
};

/// Residual threshold accepted for the double-root system.
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-9;

const BRACKET_LO_LIMIT: i64 = -10;
const BRACKET_HI_LIMIT: i64 = 100;
/// Bisection stops once the bracket is narrower than `2^-BISECTION_BITS`.
const BISECTION_BITS: u32 = 12;
const NEWTON_BITS: u32 = 256;
const NEWTON_MAX_ITERATIONS: usize = 60;

/// Real-root census of `Q_J(F; K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealRootCount {
    pub distinct: usize,
    pub with_multiplicity: usize,
}

/// Sturm counts along `p, gcd(p, p'), ...`: a root of multiplicity `m`
/// is a root of the first `m` members.
pub fn real_root_count(j: u32, k: &Rational) -> Result<RealRootCount> {
    let mut p = ReducedSpec::new(j, k.clone())?.char_poly();
    let mut counts = Vec::new();
    while p.degree().unwrap_or(0) > 0 {
        counts.push(sturm_count(&p, &Bound::NegInf, &Bound::PosInf)?);
        p = p.gcd(&p.derivative());
    }
    Ok(RealRootCount {
        distinct: counts.first().copied().unwrap_or(0),
        with_multiplicity: counts.iter().sum(),
    })
}

/// Whether every root of `p` is real (multiplicities allowed).
fn all_real(p: &Poly) -> Result<bool> {
    let chain = SturmChain::new(p)?;
    let degree = chain.head().degree().unwrap_or(0);
    Ok(chain.count(&Bound::NegInf, &Bound::PosInf)? == degree)
}

/// `Q_J(F, K)` with each coefficient of `F^m` held as an exact polynomial in `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateQ {
    j: u32,
    by_f_power: Vec<Poly>,
}

/// Value and partial derivatives of `Q` at one point.
#[derive(Clone, Debug)]
struct Jet {
    q: Rational,
    q_f: Rational,
    q_ff: Rational,
    q_k: Rational,
    q_fk: Rational,
}

impl BivariateQ {
    /// Every entry of the reduced operator is affine in `K`, so each
    /// coefficient has degree at most `J` in `K`; `J + 1` samples pin it.
    pub fn new(j: u32) -> Result<Self> {
        let nodes: Vec<Rational> = (0..=j as i64).map(rat).collect();
        let samples: Vec<Poly> = nodes
            .iter()
            .map(|k| ReducedSpec::new(j, k.clone()).map(|r| r.char_poly()))
            .collect::<Result<_>>()?;
        let by_f_power = (0..=j as usize)
            .map(|m| {
                let ys: Vec<Rational> = samples.iter().map(|p| p.coeff(m)).collect();
                Poly::interpolate(&nodes, &ys)
            })
            .collect::<Result<_>>()?;
        Ok(BivariateQ { j, by_f_power })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// `Q_J(F)` at fixed `K`.
    pub fn at_k(&self, k: &Rational) -> Poly {
        Poly::new(self.by_f_power.iter().map(|c| c.eval(k)).collect())
    }

    /// `dQ/dK` as a polynomial in `F` at fixed `K`.
    pub fn k_derivative_at(&self, k: &Rational) -> Poly {
        Poly::new(self.by_f_power.iter().map(|c| c.derivative().eval(k)).collect())
    }

    pub fn coefficient_in_k(&self, f_power: usize) -> Option<&Poly> {
        self.by_f_power.get(f_power)
    }

    fn jet(&self, f: &Rational, k: &Rational) -> Jet {
        let p = self.at_k(k);
        let dp = p.derivative();
        let pk = self.k_derivative_at(k);
        Jet {
            q: p.eval(f),
            q_f: dp.eval(f),
            q_ff: dp.derivative().eval(f),
            q_k: pk.eval(f),
            q_fk: pk.derivative().eval(f),
        }
    }

    /// `(|Q| / sum |c_m||F|^m, |Q_F| / sum m|c_m||F|^{m-1})` at `(F, K)`.
    pub fn scaled_residuals(&self, f: &Rational, k: &Rational) -> (f64, f64) {
        let p = self.at_k(k);
        let dp = p.derivative();
        let scale = |poly: &Poly| -> Rational {
            let af = f.abs();
            poly.coeffs()
                .iter()
                .rev()
                .fold(Rational::zero(), |acc, c| acc * &af + c.abs())
        };
        let ratio_of = |num: Rational, den: Rational| {
            if den.is_zero() {
                to_f64(&num.abs())
            } else {
                to_f64(&(num.abs() / den))
            }
        };
        (
            ratio_of(p.eval(f), scale(&p)),
            ratio_of(dp.eval(f), scale(&dp)),
        )
    }
}

/// Location of the first degeneracy for one `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub j: u32,
    pub k_crit: f64,
    pub f_crit: f64,
    /// High-precision dyadic values behind `k_crit` and `f_crit`.
    pub k_exact: Rational,
    pub f_exact: Rational,
    /// Scaled `|Q_J|` and `|dQ_J/dF|` at the point.
    pub residuals: (f64, f64),
    /// `false` when Newton failed and the point is the bisection estimate.
    pub polished: bool,
}

/// Solves `Q_J = dQ_J/dF = 0` on the branch where the two lowest roots merge.
pub fn find_critical(j: u32, tol: f64) -> Result<CriticalPoint> {
    if j < 2 {
        return Err(QesError::InvalidParameter(format!(
            "J={j}: a polynomial of degree < 2 has no degeneracy"
        )));
    }
    let q = BivariateQ::new(j)?;
    let (lo, hi) = bracket(&q)?;
    let (_, hi) = bisect(&q, lo, hi)?;

    let seed_k = hi.clone();
    let accept = |found: Option<(Rational, Rational)>| found.filter(|(_, k)| (k - &seed_k).abs() < rat(1));
    let mut seed_f = float_lowest_pair_midpoint(j, &hi);
    let mut newton = seed_f
        .as_ref()
        .and_then(|f| accept(newton_double_root(&q, f.clone(), seed_k.clone())));
    if newton.is_none() {
        let exact = lowest_pair_midpoint(&q.at_k(&hi))?;
        newton = accept(newton_double_root(&q, exact.clone(), seed_k.clone()));
        seed_f = Some(exact);
    }

    let (f, k, polished) = match newton {
        Some((f, k)) => (f, k, true),
        None => (seed_f.expect("seed set above"), seed_k, false),
    };
    let residuals = q.scaled_residuals(&f, &k);
    if polished && !(residuals.0 < tol && residuals.1 < tol) {
        return Err(QesError::SearchNotConverged(format!(
            "J={j}: double-root residuals {residuals:?} above {tol}"
        )));
    }
    Ok(CriticalPoint {
        j,
        k_crit: to_f64(&k),
        f_crit: to_f64(&f),
        k_exact: k,
        f_exact: f,
        residuals,
        polished,
    })
}

/// `(lo, hi)` with not-all-real at `lo` and all-real at `hi`.
fn bracket(q: &BivariateQ) -> Result<(Rational, Rational)> {
    let j = q.j;
    let all_real = |k: &Rational| all_real(&q.at_k(k));
    let err = || QesError::BracketNotFound {
        j,
        lo: BRACKET_LO_LIMIT as f64,
        hi: BRACKET_HI_LIMIT as f64,
    };
    let mut hi = rat(50);
    while !all_real(&hi)? {
        hi = &hi * rat(2);
        if hi > rat(BRACKET_HI_LIMIT) {
            return Err(err());
        }
    }
    let mut lo = rat(0);
    let mut step = rat(1);
    while all_real(&lo)? {
        hi = lo.clone();
        lo = (&lo - &step).max(rat(BRACKET_LO_LIMIT));
        step = &step * rat(2);
        if lo == rat(BRACKET_LO_LIMIT) && all_real(&lo)? {
            return Err(err());
        }
    }
    Ok((lo, hi))
}

fn bisect(q: &BivariateQ, mut lo: Rational, mut hi: Rational) -> Result<(Rational, Rational)> {
    let width = ratio(1, 1 << BISECTION_BITS);
    let half = ratio(1, 2);
    while &hi - &lo > width {
        let mid = (&lo + &hi) * &half;
        if all_real(&q.at_k(&mid))? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Midpoint of the two lowest reduced energies, from a floating-point
/// eigensolve of the operator at `K` (with `a = 0`).
fn float_lowest_pair_midpoint(j: u32, k: &Rational) -> Option<Rational> {
    let spec = ReducedSpec::new(j, k.clone()).ok()?.realize(rat(0));
    let op = build_operator(&spec);
    let n = op.dim();
    let m = DMatrix::from_fn(n, n, |r, c| to_f64(op.entries().get(r, c)));
    let mut re: Vec<f64> = m
        .schur()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .collect();
    re.sort_by(f64::total_cmp);
    let shift = to_f64(&spec.energy_shift());
    let mid = match re.as_slice() {
        [e0, e1, ..] => 0.5 * (e0 + e1) - shift,
        _ => return None,
    };
    from_f64(mid)
}

/// Midpoint of the two smallest real roots (or the smallest, if it is already double).
fn lowest_pair_midpoint(p: &Poly) -> Result<Rational> {
    let iso = isolate_real_roots(p)?;
    let first = iso
        .intervals
        .first()
        .ok_or_else(|| QesError::SearchNotConverged("no real roots at bracket end".into()))?;
    let r0 = refine_root(p, (&first.lo, &first.hi), 1e-14)?;
    if first.multiplicity >= 2 {
        return Ok(from_f64(r0).expect("finite root"));
    }
    let second = iso
        .intervals
        .get(1)
        .ok_or_else(|| QesError::SearchNotConverged("fewer than two real roots".into()))?;
    let r1 = refine_root(p, (&second.lo, &second.hi), 1e-14)?;
    Ok(from_f64(0.5 * (r0 + r1)).expect("finite root"))
}

/// Newton on `(Q, Q_F) = 0` in exact arithmetic, rounding iterates to dyadics.
fn newton_double_root(q: &BivariateQ, mut f: Rational, mut k: Rational) -> Option<(Rational, Rational)> {
    let tiny = Rational::new(BigInt::one(), BigInt::one() << 200usize);
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let jet = q.jet(&f, &k);
        // [[Q_F, Q_K], [Q_FF, Q_FK]] (dF, dK) = -(Q, Q_F)
        let det = &jet.q_f * &jet.q_fk - &jet.q_k * &jet.q_ff;
        if det.is_zero() {
            return None;
        }
        let df = -(&jet.q * &jet.q_fk - &jet.q_k * &jet.q_f) / &det;
        let dk = -(&jet.q_f * &jet.q_f - &jet.q_ff * &jet.q) / &det;
        f = round_dyadic(&(&f + &df), NEWTON_BITS);
        k = round_dyadic(&(&k + &dk), NEWTON_BITS);
        if df.abs() < tiny && dk.abs() < tiny {
            return Some((f, k));
        }
        if k.abs() > rat(10 * BRACKET_HI_LIMIT) {
            return None;
        }
    }
    None
}

/// Critical points for a range of `J`, computed in parallel, ordered by `J`.
pub fn critical_table(js: impl IntoIterator<Item = u32>, tol: f64) -> Vec<Result<CriticalPoint>> {
    let js: Vec<u32> = js.into_iter().collect();
    js.par_iter().map(|&j| find_critical(j, tol)).collect()
}

/// The parabola `a^2 + 4b = K_crit` bounding the all-real region.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalCurve {
    pub j: u32,
    pub k_crit: f64,
    pub k_exact: Rational,
}

impl CriticalCurve {
    /// `b = (K_crit - a^2) / 4`.
    pub fn b_at(&self, a: f64) -> f64 {
        (self.k_crit - a * a) / 4.0
    }

    pub fn b_at_exact(&self, a: &Rational) -> Rational {
        (&self.k_exact - a * a) / rat(4)
    }
}

pub fn critical_curve(j: u32) -> Result<CriticalCurve> {
    let cp = find_critical(j, DEFAULT_CRITICAL_TOL)?;
    Ok(CriticalCurve {
        j,
        k_crit: cp.k_crit,
        k_exact: cp.k_exact,
    })
}

/// Reference `(J, K_critical, F_critical)` rows, as printed.
pub const REFERENCE_CRITICAL_VALUES: [(u32, &str, &str); 28] = [
    (2, "0.0", "0.0"),
    (3, "3.0", "-2.0"),
    (4, "5.47086", "-4.71894"),
    (5, "7.65570", "-7.93982"),
    (6, "9.65184", "-11.5572"),
    (7, "11.5104", "-15.5070"),
    (8, "13.2625", "-19.7459"),
    (9, "14.9287", "-24.2419"),
    (10, "16.5235", "-28.9706"),
    (11, "18.0576", "-33.9126"),
    (12, "19.5392", "-39.0521"),
    (13, "20.9747", "-44.3758"),
    (14, "22.3695", "-49.8725"),
    (15, "23.7276", "-55.5323"),
    (16, "25.0526", "-61.3470"),
    (17, "26.3475", "-67.3089"),
    (18, "27.6149", "-73.4116"),
    (19, "28.8569", "-79.6490"),
    (20, "30.0754", "-86.0158"),
    (21, "31.2721", "-92.5072"),
    (22, "32.4485", "-99.1187"),
    (23, "33.6058", "-105.846"),
    (24, "34.7453", "-112.686"),
    (25, "35.8679", "-119.635"),
    (26, "36.9747", "-126.689"),
    (27, "38.0665", "-133.846"),
    (28, "39.1439", "-141.103"),
    (29, "40.2078", "-148.458"),
];

/// Unit in the last printed place of a decimal string (`"5.47086"` → `1e-5`).
pub fn last_place(printed: &str) -> f64 {
    let decimals = printed.split_once('.').map_or(0, |(_, f)| f.len());
    10f64.powi(-(decimals as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_around_j3_criticality() {
        assert_eq!(real_root_count(3, &rat(4)).unwrap().distinct, 3);
        assert_eq!(real_root_count(3, &rat(2)).unwrap().distinct, 1);
        let at = real_root_count(3, &rat(3)).unwrap();
        assert_eq!((at.distinct, at.with_multiplicity), (2, 3));
    }

    #[test]
    fn j2_counts_double_root() {
        let c = real_root_count(2, &rat(0)).unwrap();
        assert_eq!((c.distinct, c.with_multiplicity), (1, 2));
    }

    #[test]
    fn bivariate_matches_reduced_samples() {
        let q = BivariateQ::new(4).unwrap();
        // F^4 - 10K F^2 - 96F + 9K^2
        assert_eq!(q.coefficient_in_k(2).unwrap(), &Poly::from_ints(&[0, -10]));
        assert_eq!(q.coefficient_in_k(0).unwrap(), &Poly::from_ints(&[0, 0, 9]));
        let k = ratio(7, 3);
        assert_eq!(q.at_k(&k), ReducedSpec::new(4, k.clone()).unwrap().char_poly());
    }

    #[test]
    fn small_critical_points_are_exact() {
        let c2 = find_critical(2, DEFAULT_CRITICAL_TOL).unwrap();
        assert_eq!((c2.k_exact.clone(), c2.f_exact.clone()), (rat(0), rat(0)));
        let c3 = find_critical(3, DEFAULT_CRITICAL_TOL).unwrap();
        assert_eq!((c3.k_crit, c3.f_crit), (3.0, -2.0));
        assert!(c3.polished);
    }

    #[test]
    fn j1_has_no_critical_point() {
        assert!(find_critical(1, DEFAULT_CRITICAL_TOL).is_err());
    }

    #[test]
    fn curve_examples() {
        let c3 = critical_curve(3).unwrap();
        assert_eq!(c3.b_at(0.0), 0.75);
        assert_eq!(c3.b_at(1.0), 0.5);
        assert_eq!(c3.b_at_exact(&rat(0)), ratio(3, 4));
        assert_eq!(critical_curve(2).unwrap().b_at(0.0), 0.0);
    }

    #[test]
    fn last_place_units() {
        assert_eq!(last_place("5.47086"), 1e-5);
        assert_eq!(last_place("-105.846"), 1e-3);
        assert_eq!(last_place("0.0"), 1e-1);
    }
}
