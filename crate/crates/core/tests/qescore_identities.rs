//! Operator-built QES polynomials against the closed forms.

use num_traits::Zero;
use proptest::prelude::*;
use qes_core::qescore::{
    build_operator, qes_eigenvalues, reference_polynomial, to_reduced, Form, QuarticSpec,
    ReducedSpec,
};
use qes_core::ratpoly::{rat, ratio, Rational};

/// `n` distinct rationals.
fn grid(n: usize) -> Vec<Rational> {
    (0..n as i64).map(|i| ratio(2 * i - n as i64, 3)).collect()
}

#[test]
fn raw_polynomials_match_on_identity_grid() {
    for j in 1..=5u32 {
        let reference = reference_polynomial(j, Form::Raw).unwrap();
        let pts = grid(2 * j as usize + 2);
        for a in &pts {
            for b in &pts {
                let spec = QuarticSpec::new(j, a.clone(), b.clone()).unwrap();
                let ours = build_operator(&spec).char_poly();
                assert_eq!(ours, reference.at_ab(a, b).unwrap(), "J={j} a={a} b={b}");
            }
        }
    }
}

#[test]
fn reduced_polynomials_depend_only_on_k() {
    for j in 1..=8u32 {
        let reference = reference_polynomial(j, Form::Reduced).unwrap();
        for k in grid(2 * j as usize + 2) {
            let expect = reference.at_k(&k).unwrap();
            let r = ReducedSpec::new(j, k.clone()).unwrap();
            for a in [rat(0), rat(1)] {
                let spec = r.realize(a);
                let ours = to_reduced(&build_operator(&spec).char_poly(), &spec);
                assert_eq!(ours, expect, "J={j} K={k} a={}", spec.a());
            }
        }
    }
}

#[test]
fn j3_b1_eigenvalues() {
    let spec = QuarticSpec::new(3, rat(0), rat(1)).unwrap();
    let qs = qes_eigenvalues(&spec, 1e-12).unwrap();
    let expect = [-2.350_261_74, -0.078_377_75, 5.428_639_49];
    for (x, e) in qs.real_eigenvalues.iter().zip(expect) {
        assert!((x - e).abs() < 1e-7, "{x} vs {e}");
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_and_monicity(j in 1u32..=9, a in small_rational(), b in small_rational()) {
        let spec = QuarticSpec::new(j, a.clone(), b.clone()).unwrap();
        let op = build_operator(&spec);
        let p = op.char_poly();
        let jr = rat(j as i64);
        let trace = &jr * &b * &b + &jr * &jr * &a;
        prop_assert!(p.is_monic());
        prop_assert_eq!(p.degree(), Some(j as usize));
        prop_assert_eq!(op.trace(), trace.clone());
        prop_assert_eq!(-p.coeff(j as usize - 1), trace);
    }

    #[test]
    fn qes_roots_are_conjugate_closed(j in 2u32..=6, a in small_rational(), b in small_rational()) {
        let spec = QuarticSpec::new(j, a, b).unwrap();
        let qs = qes_eigenvalues(&spec, 1e-12).unwrap();
        prop_assert_eq!(qs.len(), j as usize);
        let all = qs.all();
        for z in &all {
            let partner = all.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(partner < 1e-8 * (1.0 + z.norm()));
        }
        let sum: f64 = all.iter().map(|z| z.re).sum();
        let trace = qes_core::ratpoly::to_f64(&build_operator(&spec).trace());
        prop_assert!((sum - trace).abs() < 1e-7 * (1.0 + trace.abs()));
        prop_assert!(!qs.char_poly.coeff(0).is_zero() || qs.all().iter().any(|z| z.norm() < 1e-9));
    }
}
