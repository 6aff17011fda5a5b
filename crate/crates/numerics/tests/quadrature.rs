use fieldlab_numerics::{gauss_legendre, periodic_trapezoid};
use proptest::prelude::*;
use std::f64::consts::PI;

/// Exact ∫_a^b Σ c_k x^k dx.
fn poly_integral(c: &[f64], a: f64, b: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(k, ck)| ck * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0))
        .sum()
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ck| acc * x + ck)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn exact_to_degree_2n_minus_1(
        n in 1usize..=24,
        a in -2.0f64..1.0,
        w in 0.1f64..3.0,
        seed in prop::collection::vec(-1.0f64..1.0, 48),
    ) {
        let b = a + w;
        let c = &seed[..2 * n];
        let rule = gauss_legendre(n, a, b).unwrap();
        let got = rule.integrate(|x| horner(c, x));
        let want = poly_integral(c, a, b);
        let scale = c.iter().enumerate().map(|(k, ck)| ck.abs() * a.abs().max(b.abs()).powi(k as i32 + 1)).sum::<f64>().max(1e-300);
        prop_assert!((got - want).abs() <= 1e-12 * scale, "{got} vs {want}");
    }

    #[test]
    fn nodes_increase_and_weights_sum_to_length(n in 1usize..=80, a in -5.0f64..5.0, w in 0.01f64..10.0) {
        let r = gauss_legendre(n, a, a + w).unwrap();
        prop_assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
        prop_assert!(r.weights.iter().all(|&x| x > 0.0));
        prop_assert!(r.nodes[0] > a && r.nodes[n - 1] < a + w);
        prop_assert!((r.weights.iter().sum::<f64>() - w).abs() <= 1e-13 * w);
    }
}

#[test]
fn degree_2n_is_not_exact() {
    // x⁴ with two points: Gauss gives 2/9, exact 2/5
    let r = gauss_legendre(2, -1.0, 1.0).unwrap();
    assert!((r.integrate(|x| x.powi(4)) - 2.0 / 9.0).abs() < 1e-15);
}

#[test]
fn smooth_integrands() {
    let r = gauss_legendre(20, 0.0, 1.0).unwrap();
    assert!((r.integrate(f64::exp) - (1f64.exp() - 1.0)).abs() < 1e-12);
    let r = gauss_legendre(40, 0.0, PI).unwrap();
    assert!((r.integrate(f64::sin) - 2.0).abs() < 1e-13);
}

#[test]
fn trapezoid_on_periodic_log() {
    // ∫₀¹ log(a − 2cos 2πx) dx = log((a + √(a² − 4))/2)
    for a in [2.5, 3.0, 5.0] {
        let r = periodic_trapezoid(128, 1.0).unwrap();
        let got = r.integrate(|x| (a - 2.0 * (2.0 * PI * x).cos()).ln());
        let want = ((a + (a * a - 4.0f64).sqrt()) / 2.0).ln();
        assert!((got - want).abs() < 1e-13, "{a}: {got} vs {want}");
    }
}
