use fieldlab_anomaly::*;
use num_complex::Complex64;
use num_rational::Rational64;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

#[test]
fn fibers_sum_to_degree() {
    let b = BranchData::new(4, vec![vec![2, 1, 1], vec![3, 1], vec![4]]).unwrap();
    assert_eq!(b.genus().unwrap(), 0);
    let w = branched_weights(&b, r(1, 1));
    assert_eq!(w, vec![r(1, 8), r(2, 9), r(5, 16)]);
    assert!(BranchData::new(4, vec![vec![2, 1]]).is_err());
}

#[test]
fn composition_multiplies_orders() {
    let c = r(3, 2);
    let inner = BranchData::power(2).unwrap();
    let fiber = inner.then_power_at(0, 3).unwrap();
    assert_eq!(fiber, vec![6]);
    let composite = BranchData::power(6).unwrap();
    let direct: Rational64 = fiber.iter().map(|&o| ramification_weight(o, c)).sum();
    assert_eq!(direct, branched_weights(&composite, c)[0]);
}

#[test]
fn renyi_exponents_are_exact() {
    let c = r(1, 1);
    assert_eq!(renyi_exponent(2, c).unwrap(), r(-1, 4));
    assert_eq!(renyi_exponent(4, r(1, 2)).unwrap(), r(-5, 16));
    for d in 2..8u32 {
        let e = renyi_exponent(d, c).unwrap();
        let f = renyi_entropy(10.0, 3.0, d, 1.0, 1.0).unwrap().exponent;
        assert!((*e.numer() as f64 / *e.denom() as f64 - f).abs() < 1e-15);
    }
}

#[test]
fn entropy_profile() {
    // S_d − S_d(ℓ₀) = (c/6)(1 + 1/d) log(chord/chord₀)
    let (l, c) = (20.0, 1.0);
    for d in [2u32, 3, 5] {
        let a = renyi_entropy(l, 2.0, d, c, 1.0).unwrap();
        let b = renyi_entropy(l, 7.0, d, c, 1.0).unwrap();
        let want = c / 6.0 * (1.0 + 1.0 / d as f64) * (b.chord / a.chord).ln();
        assert!((b.entropy - a.entropy - want).abs() < 1e-13);
        // symmetric under ℓ ↦ L − ℓ
        let m = renyi_entropy(l, l - 2.0, d, c, 1.0).unwrap();
        assert!((m.entropy - a.entropy).abs() < 1e-13);
    }
    assert!(matches!(renyi_entropy(1.0, 2.0, 2, 1.0, 1.0), Err(AnomalyError::Precondition(_))));
    assert!(matches!(renyi_entropy(1.0, 1.0, 2, 1.0, 1.0), Err(AnomalyError::Precondition(_))));
    assert!(renyi_entropy(2.0, 1.0, 1, 1.0, 1.0).is_err());
}

#[test]
fn two_point_form_depends_on_distance() {
    let u = SpherePoint::from_plane(Complex64::new(0.2, 0.1));
    let v = SpherePoint::from_plane(Complex64::new(-0.3, 0.8));
    let a = two_point_form(u, v, 0.25, 2.0).unwrap();
    let b = two_point_form(u.antipode(), v.antipode(), 0.25, 2.0).unwrap();
    assert!((a - b).abs() < 1e-13 * a);
    // antipodal points: sin(π/2) = 1
    assert!((two_point_form(u, u.antipode(), 0.7, 3.0).unwrap() - 3.0).abs() < 1e-13);
    assert!(two_point_form(u, u, 0.1, 1.0).is_err());
}
