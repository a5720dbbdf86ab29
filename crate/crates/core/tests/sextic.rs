use num_traits::Zero;
use qes_core::ratpoly::{sturm_count, Bound};
use qes_core::sextic::{sextic_char_poly, sextic_eigenvalues, sextic_operator, SexticSpec};

#[test]
fn all_real_up_to_twenty() {
    for j in 1..=20 {
        let p = sextic_char_poly(SexticSpec::new(j).unwrap());
        assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap(), j as usize, "J={j}");
    }
}

#[test]
fn energies_sum_to_zero() {
    for j in 1..=10 {
        let spec = SexticSpec::new(j).unwrap();
        let t = sextic_operator(spec);
        assert!(t.trace().is_zero());
        let e = sextic_eigenvalues(spec, 1e-13).unwrap();
        let scale: f64 = e.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        assert!(e.iter().sum::<f64>().abs() < 1e-10 * scale, "J={j}");
    }
}

#[test]
fn reference_blocks() {
    let e = |j| sextic_eigenvalues(SexticSpec::new(j).unwrap(), 1e-14).unwrap();
    assert_eq!(e(1), vec![0.0]);
    let r8 = 8f64.sqrt();
    let e2 = e(2);
    assert!((e2[0] + r8).abs() < 1e-12 && (e2[1] - r8).abs() < 1e-12);
    for (x, y) in e(3).iter().zip([-8.0, 0.0, 8.0]) {
        assert!((x - y).abs() < 1e-12);
    }
    assert_eq!(e(4).len(), 4);
}

#[test]
fn rejects_zero() {
    assert!(SexticSpec::new(0).is_err());
}
