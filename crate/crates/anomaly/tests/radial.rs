use fieldlab_anomaly::*;
use num_complex::Complex64;

#[test]
fn leading_coefficient_matches_potential() {
    let grid: Vec<f64> = (0..8).map(|k| 0.05 * 0.7f64.powi(k)).collect();
    let cases = [
        (ConicalSurfaceData::power_pullback(2).unwrap(), 0),
        (ConicalSurfaceData::power_pullback(3).unwrap(), 1),
        (
            ConicalSurfaceData::new(
                SphereFn::from_poly(Poly3::linear([0.5, 0.1, -0.3]))
                    .with_cone(SpherePoint::from_plane(Complex64::new(0.2, 0.9)), -0.6),
            )
            .unwrap(),
            0,
        ),
    ];
    for (d, j) in &cases {
        for alpha in [0.0, 1.3, 4.0] {
            let r = cone_radial_distance(d, *j, &grid, alpha).unwrap();
            assert!(r.rel_err < 1e-8, "{r:?}");
            let g = d.cone(*j).unwrap().1;
            assert!(r.remainder_exponent > g + 1.5, "{}", r.remainder_exponent);
        }
    }
}

#[test]
fn power_pullback_coefficient() {
    // e^{φ} = 2d·2^{−(d−1)}·2^{d−1}/2^d at the cone, so the coefficient is 2d/(2^d·d)
    for d in 2..5u32 {
        let data = ConicalSurfaceData::power_pullback(d).unwrap();
        let phi = data.regular_potential(0).unwrap();
        let want = (2.0 * d as f64).ln() - (d as f64 - 1.0) * 2f64.ln() + (d as f64 - 1.0) * 2f64.ln()
            - (d as f64 * 2f64.ln());
        assert!((phi - want).abs() < 1e-12);
    }
}

#[test]
fn bad_grids() {
    let d = ConicalSurfaceData::power_pullback(2).unwrap();
    assert!(cone_radial_distance(&d, 0, &[0.1, 0.05], 0.0).is_err());
    assert!(cone_radial_distance(&d, 0, &[0.1, 0.05, 2.0], 0.0).is_err());
    assert!(cone_radial_distance(&d, 5, &[0.1, 0.05, 0.01], 0.0).is_err());
}
