//! Self-check suite: the closed-form polynomials, the critical-value table,
//! the sl(2) relations and the two forms of the gauge-rotated Hamiltonian.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::criticality::{find_critical, last_place, DEFAULT_CRITICAL_TOL, REFERENCE_CRITICAL_VALUES};
use crate::qescore::{build_operator, reference_polynomial, to_reduced, Form, QuarticSpec, ReducedSpec};
use crate::ratpoly::{rat, ratio, Rational};
use crate::sl2::{build_generators, commutators_hold, verify_equivalence};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// `n` distinct rationals `(2i - n)/3`.
pub fn identity_grid(n: usize) -> Vec<Rational> {
    (0..n as i64).map(|i| ratio(2 * i - n as i64, 3)).collect()
}

/// Operator polynomial against the closed raw form on a `(2J+2)^2` grid of `(a, b)`.
pub fn raw_identity(j: u32) -> Check {
    let name = format!("raw Q_{j}(E; a, b)");
    let reference = match reference_polynomial(j, Form::Raw) {
        Ok(r) => r,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let pts = identity_grid(2 * j as usize + 2);
    for a in &pts {
        for b in &pts {
            let ours = QuarticSpec::new(j, a.clone(), b.clone()).map(|s| build_operator(&s).char_poly());
            let theirs = reference.at_ab(a, b);
            match (ours, theirs) {
                (Ok(x), Ok(y)) if x == y => {}
                (Ok(x), Ok(y)) => {
                    return Check::new(name, false, format!("a={a} b={b}: {x} vs {y}"));
                }
                (Err(e), _) | (_, Err(e)) => return Check::new(name, false, e.to_string()),
            }
        }
    }
    Check::new(name, true, format!("{0}x{0} grid", pts.len()))
}

/// Reduced polynomial against the closed form, for two `(a, b)` per `K`.
pub fn reduced_identity(j: u32) -> Check {
    let name = format!("reduced Q_{j}(F; K)");
    let reference = match reference_polynomial(j, Form::Reduced) {
        Ok(r) => r,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let ks = identity_grid(2 * j as usize + 2);
    for k in &ks {
        let expect = match reference.at_k(k) {
            Ok(p) => p,
            Err(e) => return Check::new(name, false, e.to_string()),
        };
        let reduced = match ReducedSpec::new(j, k.clone()) {
            Ok(r) => r,
            Err(e) => return Check::new(name, false, e.to_string()),
        };
        for a in [rat(0), ratio(3, 2)] {
            let spec = reduced.realize(a);
            let ours = to_reduced(&build_operator(&spec).char_poly(), &spec);
            if ours != expect {
                return Check::new(
                    name,
                    false,
                    format!("K={k} a={}: {ours} vs {expect}", spec.a()),
                );
            }
        }
    }
    Check::new(name, true, format!("{} values of K, two realizations each", ks.len()))
}

/// One row of the reference critical-value table, to within `ulps` units
/// in the last printed place.
pub fn table_row(j: u32, k_printed: &str, f_printed: &str, ulps: f64) -> Check {
    let name = format!("critical J={j}");
    let cp = match find_critical(j, DEFAULT_CRITICAL_TOL) {
        Ok(cp) => cp,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let parse = |s: &str| s.parse::<f64>().unwrap_or(f64::NAN);
    let dk = (cp.k_crit - parse(k_printed)).abs() / last_place(k_printed);
    let df = (cp.f_crit - parse(f_printed)).abs() / last_place(f_printed);
    Check::new(
        name,
        dk <= ulps && df <= ulps,
        format!(
            "K={:.7} ({k_printed}, {dk:.2} ulp) F={:.7} ({f_printed}, {df:.2} ulp)",
            cp.k_crit, cp.f_crit
        ),
    )
}

pub fn table_regression(ulps: f64) -> Vec<Check> {
    REFERENCE_CRITICAL_VALUES
        .iter()
        .map(|(j, k, f)| table_row(*j, k, f, ulps))
        .collect()
}

/// The sl(2) relations for every `J <= j_max`.
pub fn commutator_check(j_max: u32) -> Check {
    let failing: Vec<u32> = (1..=j_max).filter(|&j| !commutators_hold(&build_generators(j))).collect();
    Check::new(
        format!("sl(2) relations J<={j_max}"),
        failing.is_empty(),
        if failing.is_empty() {
            "exact".to_string()
        } else {
            format!("fail at J={failing:?}")
        },
    )
}

/// A small random rational: numerator in `[-20, 20]`, denominator in `[1, 9]`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-20..=20), rng.gen_range(1..=9))
}

/// Generator form against differential form of `h` for every `J <= j_max`
/// at `samples` random rational `(a, b)`.
pub fn equivalence_check(j_max: u32, samples: usize, seed: u64) -> Check {
    let name = format!("h equivalence J<={j_max}");
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
        for j in 1..=j_max {
            match verify_equivalence(j, &a, &b) {
                Ok(eq) if eq.holds => {}
                Ok(eq) => {
                    return Check::new(name, false, format!("J={j} a={a} b={b}: {:?}", eq.mismatch));
                }
                Err(e) => return Check::new(name, false, e.to_string()),
            }
        }
    }
    Check::new(name, true, format!("{samples} random (a, b)"))
}

/// Every check, in a fixed order.
pub fn run_all() -> Vec<Check> {
    let mut out: Vec<Check> = (1..=5).map(raw_identity).collect();
    out.extend((1..=8).map(reduced_identity));
    out.extend(table_regression(5.0));
    out.push(commutator_check(12));
    out.push(equivalence_check(10, 10, 0x5eed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_checks_pass() {
        assert!(raw_identity(2).passed);
        assert!(reduced_identity(3).passed);
        assert!(commutator_check(4).passed);
        assert!(equivalence_check(4, 2, 1).passed);
        assert!(table_row(3, "3.0", "-2.0", 0.0).passed);
    }

    #[test]
    fn mismatched_row_fails() {
        let c = table_row(3, "3.9", "-2.0", 5.0);
        assert!(!c.passed, "{c:?}");
    }

    #[test]
    fn missing_reference_fails_cleanly() {
        assert!(!raw_identity(6).passed);
    }
}
