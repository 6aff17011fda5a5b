use fieldlab_numerics::{gauss_legendre, QuadratureRule};
use std::sync::OnceLock;
use fieldlab_rpwitness::*;

/// Fφ(ξ) by plain Gauss–Legendre on the support, independent of the
/// tanh-sinh rule inside Bump.
fn fourier_gl(b: &Bump, xi: f64) -> (f64, f64) {
    static UNIT: OnceLock<QuadratureRule> = OnceLock::new();
    let unit = UNIT.get_or_init(|| gauss_legendre(400, -1.0, 1.0).unwrap());
    let (c, r) = (b.center, b.halfwidth);
    unit.nodes.iter().zip(&unit.weights).fold((0.0, 0.0), |acc, (&t, &w)| {
        let x = c + r * t;
        let v = r * w * b.eval(x);
        (acc.0 + v * (xi * x).cos(), acc.1 + v * (xi * x).sin())
    })
}

fn pairing_oracle(b: &Bump, kappa: f64, n: usize, cut: f64) -> f64 {
    // composite rule: panels of width ≤ 2 with 48 nodes each
    let panels = cut.ceil() as usize;
    let h = 2.0 * cut / panels as f64;
    let unit = gauss_legendre(48, 0.0, 1.0).unwrap();
    let mut total = 0.0;
    for p in 0..panels {
        let left = -cut + p as f64 * h;
        for (&t, &w) in unit.nodes.iter().zip(&unit.weights) {
            let xi = left + t * h;
            let (a, s) = fourier_gl(b, xi);
            total += h * w * xi.powi(4 * n as i32) * (a * a - s * s) / (xi * xi + kappa);
        }
    }
    total
}

#[test]
fn kappa_one_has_a_witness() {
    let c = line_witness(1.0, 40).unwrap();
    let WitnessParams::LineDerivative { n, kappa, .. } = c.params else { panic!() };
    assert_eq!(kappa, 1.0);
    assert!(n <= 40);
    assert!(c.negative && c.pairing_value < -c.tolerance);
    assert_eq!(c.trend.len(), n + 1);
    assert!(c.trend[..n].iter().all(|t| t.1 >= 0.0));
    let oracle = pairing_oracle(&Bump::standard(), 1.0, n, 1.0);
    assert!((c.pairing_value - oracle).abs() < 1e-12, "{} vs {oracle}", c.pairing_value);
}

#[test]
fn plain_bump_pairs_positively() {
    let b = Bump::standard();
    for kappa in [0.1, 1.0, 10.0] {
        let p = line_pairing(&b, kappa, 0).unwrap();
        assert!(p.value > 0.0);
        assert!((p.value - pairing_oracle(&b, kappa, 0, 1.0)).abs() < 1e-12);
    }
}

#[test]
fn uncut_weight_is_positive_and_matches_fourier_side() {
    let b = Bump::standard();
    for kappa in [0.25, 1.0, 4.0] {
        for n in 0..6 {
            let u = line_pairing_uncut(&b, kappa, n).unwrap();
            assert!(u >= -1e-12);
        }
        // large finite window of the same integral; Fφ decays faster than any power
        let u = line_pairing_uncut(&b, kappa, 0).unwrap();
        let window = pairing_oracle(&b, kappa, 0, 60.0);
        assert!((u - window).abs() < 1e-7 * u, "{u} vs {window}");
    }
}

#[test]
fn search_reports_trend_when_nothing_found() {
    match line_witness(1.0, 0) {
        Err(RpError::NotFound { n_max, trend }) => {
            assert_eq!(n_max, 0);
            assert_eq!(trend.len(), 1);
            assert!(trend[0].1 > 0.0);
        }
        other => panic!("{other:?}"),
    }
    assert!(line_witness(0.0, 5).is_err());
}
