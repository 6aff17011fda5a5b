use fieldlab_covers::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn naive_eigen_sum(l: f64, n: usize, t: f64) -> f64 {
    let big = n as f64 * l;
    (-4000i64..=4000)
        .map(|k| (-t * (2.0 * PI * k as f64 / big).powi(2)).exp())
        .sum()
}

#[test]
fn single_sheet_poisson() {
    let h = heat_trace_cover(2.0 * PI, 1, 1.0).unwrap();
    assert!(h.difference() < 1e-10);
    assert!((h.eigen_sum - naive_eigen_sum(2.0 * PI, 1, 1.0)).abs() < 1e-12);
    // Σ_n e^{−n²} by hand
    let by_hand: f64 = 1.0 + 2.0 * (1..30).map(|n: i32| (-(n * n) as f64).exp()).sum::<f64>();
    assert!((h.eigen_sum - by_hand).abs() < 1e-14);
}

#[test]
fn theta_identity_on_grid() {
    let ts = [0.05, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0];
    let mut worst: f64 = 0.0;
    for n in [1usize, 2, 3, 5, 8, 16, 32, 64] {
        for &t in &ts {
            let h = heat_trace_cover(2.0 * PI, n, t).unwrap();
            worst = worst.max(h.difference());
            assert!((h.eigen_sum - naive_eigen_sum(2.0 * PI, n, t)).abs() < 1e-9);
        }
    }
    assert!(worst < 1e-10, "{worst:e}");
}

proptest! {
    #[test]
    fn theta_identity(l in 0.2f64..10.0, n in 1usize..=64, lt in (0.05f64).ln()..(100f64).ln()) {
        let h = heat_trace_cover(l, n, lt.exp()).unwrap();
        prop_assert!(h.difference() <= 1e-10 * h.eigen_sum.max(1.0));
    }
}
