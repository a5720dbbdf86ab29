use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;
use qes_core::linalg::Matrix;
use qes_core::qescore::{build_operator, qes_eigenvalues, QuarticSpec};
use qes_core::ratpoly::{complex_roots, rat, ratio, to_f64, Rational};
use qes_core::sl2::{
    build_algebraic_h, build_generators, commutators_hold, differential_h, gaussian_char_poly,
    verify_equivalence, zero_generator_weights, GaussianRational,
};

/// Applies `x^2 d/dx - (J-1)x`, `x d/dx - (J-1)/2` and `d/dx` to the monomial
/// `x^k` directly and returns `(power, coefficient)` images.
fn brute_force(j: u32, k: usize) -> [(Option<usize>, Rational); 3] {
    let (kr, s) = (rat(k as i64), rat(j as i64 - 1));
    let plus = (Some(k + 1), &kr - &s);
    let zero = (Some(k), &kr - &s * ratio(1, 2));
    let minus = (k.checked_sub(1), kr.clone());
    [plus, zero, minus]
}

#[test]
fn generators_agree_with_direct_application() {
    for j in 1..=8u32 {
        let g = build_generators(j);
        let n = j as usize;
        for k in 0..n {
            for (m, (power, c)) in [&g.plus, &g.zero, &g.minus].iter().zip(brute_force(j, k)) {
                for row in 0..n {
                    let expect = if power == Some(row) { c.clone() } else { Rational::zero() };
                    assert_eq!(*m.get(row, k), expect, "J={j} col={k} row={row}");
                }
                // the image never leaves the span
                if power == Some(n) {
                    assert!(c.is_zero());
                }
            }
        }
    }
}

#[test]
fn commutators_up_to_twelve() {
    for j in 1..=12 {
        assert!(commutators_hold(&build_generators(j)), "J={j}");
    }
}

#[test]
fn zero_generator_has_spin_weights() {
    for j in 1..=9u32 {
        let w = zero_generator_weights(&build_generators(j));
        let spin = ratio(j as i64 - 1, 2);
        for (m, x) in w.iter().enumerate() {
            assert_eq!(*x, rat(m as i64) - &spin);
        }
    }
}

#[test]
fn algebraic_h_characteristic_polynomial_is_q() {
    let pts = [rat(0), rat(1), ratio(-2, 3), ratio(5, 2)];
    for j in 1..=8u32 {
        for a in &pts {
            for b in &pts {
                let h = build_algebraic_h(j, a, b);
                let spec = QuarticSpec::new(j, a.clone(), b.clone()).unwrap();
                let q = build_operator(&spec).char_poly();
                assert_eq!(gaussian_char_poly(&h), Some(q), "J={j} a={a} b={b}");
            }
        }
    }
}

fn to_complex(m: &Matrix<GaussianRational>) -> Vec<Vec<Complex64>> {
    m.rows()
        .iter()
        .map(|r| r.iter().map(|z| Complex64::new(to_f64(&z.re), to_f64(&z.im))).collect())
        .collect()
}

#[test]
fn j3_a1_b1_eigenvalues_match_qes_values() {
    let h = build_algebraic_h(3, &rat(1), &rat(1));
    let cp = gaussian_char_poly(&h).unwrap();
    let ours = complex_roots(&cp, 1e-10).unwrap();
    let spec = QuarticSpec::new(3, rat(1), rat(1)).unwrap();
    let qes = qes_eigenvalues(&spec, 1e-12).unwrap().all();
    for z in &qes {
        assert!(ours.iter().any(|w| (w - z).norm() < 1e-8), "{z} missing from {ours:?}");
    }
    // every entry of h is finite and the matrix is genuinely complex
    assert!(to_complex(&h).iter().flatten().any(|z| z.im != 0.0));
}

#[test]
fn equivalence_examples() {
    for (j, a, b) in [(1, rat(3), ratio(-7, 2)), (5, rat(2), rat(-3)), (10, ratio(1, 3), ratio(7, 2))] {
        let eq = verify_equivalence(j, &a, &b).unwrap();
        assert!(eq.holds, "J={j}: {:?}", eq.mismatch);
    }
}

#[test]
fn algebraic_h_j1_is_scalar() {
    let h = build_algebraic_h(1, &ratio(2, 5), &rat(3));
    assert_eq!(h.get(0, 0).re, rat(9) + ratio(2, 5));
    assert!(h.get(0, 0).im.is_zero());
}

#[test]
fn differential_form_matches_for_small_blocks() {
    let (a, b) = (ratio(-1, 4), ratio(3, 5));
    for j in 1..=6 {
        assert_eq!(build_algebraic_h(j, &a, &b), differential_h(j, &a, &b));
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-15i64..=15, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn equivalence_holds_for_random_parameters(j in 1u32..=10, a in small_rational(), b in small_rational()) {
        let eq = verify_equivalence(j, &a, &b).unwrap();
        prop_assert!(eq.holds, "{:?}", eq.mismatch);
    }
}
