use fieldlab_transfer::*;
use std::f64::consts::PI;

#[test]
fn seeded_chains_are_reproducible() {
    let p = EvenPoly::quartic();
    let a = mcmc_chain(&p, 8, 2000, 9, McmcOptions::default()).unwrap();
    let b = mcmc_chain(&p, 8, 2000, 9, McmcOptions::default()).unwrap();
    assert_eq!(a.samples, b.samples);
    let c = mcmc_chain(&p, 8, 2000, 10, McmcOptions::default()).unwrap();
    assert_ne!(a.samples, c.samples);
    assert!(mcmc_chain(&p, 8, 0, 9, McmcOptions::default()).is_err());
}

#[test]
fn gaussian_covariance_and_acceptance() {
    let n = 16;
    let r = mcmc_chain(&EvenPoly::mass(1.0), n, 200_000, 3, McmcOptions::default()).unwrap();
    assert!(r.acceptance_rate > 0.1 && r.acceptance_rate < 0.9);
    for d in [0usize, 1, 4] {
        let want: f64 = (0..n)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / n as f64;
                (th * d as f64).cos() / (3.0 - 2.0 * th.cos())
            })
            .sum::<f64>()
            / (2.0 * n as f64);
        // average over translations for a lower-variance series
        let xs: Vec<f64> = r
            .samples
            .iter()
            .map(|s| (0..n).map(|i| s[i] * s[(i + d) % n]).sum::<f64>() / n as f64)
            .collect();
        let (m, se) = fieldlab_transfer::mcmc::batch_means(&xs, 50);
        assert!((m - want).abs() <= 3.0 * se, "d={d}: {m} ± {se} vs {want}");
    }
}

#[test]
fn quartic_free_energy_short_run() {
    let n = 32;
    let model = build_transfer(&EvenPoly::quartic(), 200, 8.0).unwrap();
    let exact = log_partition_function(&model, n).unwrap() / n as f64;
    let est = mcmc_free_energy(&EvenPoly::quartic(), n, 100_000, 8, 77, McmcOptions::default())
        .unwrap();
    assert!(
        (est.density - exact).abs() <= 3.0 * est.standard_error,
        "{} ± {} vs {exact}",
        est.density,
        est.standard_error
    );
}
