mod common;

use fieldlab_anomaly::*;

fn q() -> SphereQuad {
    SphereQuad::default()
}

#[test]
fn constant_factor() {
    for c in [-1.0, 0.3, 2.0] {
        let a = anomaly_smooth(&SphereFn::constant(c), &SphereFn::zero(), &q()).unwrap();
        assert!((a.value - c / 3.0).abs() < 1e-13);
    }
}

#[test]
fn height_function() {
    // ∫|∇z|² = 8π/3 and ∫z = 0, so A = a²/9
    for a in [0.1, 1.0, 3.0] {
        let s = SphereFn::from_poly(Poly3::linear([0.0, 0.0, a]));
        let v = anomaly_smooth(&s, &SphereFn::zero(), &q()).unwrap().value;
        assert!((v - a * a / 9.0).abs() < 1e-12 * a * a);
    }
}

#[test]
fn cocycle() {
    let s1 = SphereFn::from_poly(Poly3::linear([0.3, -0.2, 0.1]).plus(&Poly3::monomial([1, 1, 0], 0.4)));
    let s2 = SphereFn::from_poly(Poly3::monomial([0, 0, 3], -0.5).plus(&Poly3::constant(0.2)))
        .with_log_poly(0.3, Poly3::constant(2.0).plus(&Poly3::linear([1.0, 0.0, 0.0])));
    let total = anomaly_smooth(&s1.plus(&s2), &SphereFn::zero(), &q()).unwrap().value;
    let a = anomaly_smooth(&s2, &s1, &q()).unwrap().value;
    let b = anomaly_smooth(&s1, &SphereFn::zero(), &q()).unwrap().value;
    assert!((total - a - b).abs() < 1e-8);
    assert!((total - common::smooth_brute(&s1.plus(&s2), &SphereFn::zero())).abs() < 1e-9);
}

#[test]
fn rejects_singular_input() {
    let c = SphereFn::zero().with_cone(SpherePoint::north(), 1.0);
    assert!(anomaly_smooth(&c, &SphereFn::zero(), &q()).is_err());
    assert!(anomaly_smooth(&SphereFn::zero(), &c, &q()).is_err());
    let neg = SphereFn::zero().with_log_poly(1.0, Poly3::linear([1.0, 0.0, 0.0]));
    assert!(anomaly_smooth(&neg, &SphereFn::zero(), &q()).is_err());
}
