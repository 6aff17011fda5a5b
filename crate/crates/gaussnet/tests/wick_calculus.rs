mod common;

use fieldlab_gaussnet::*;
use nalgebra::DMatrix;

fn f(var: usize, power: u32, ordered: bool) -> WickFactor {
    WickFactor { var, power, ordered }
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

#[test]
fn small_moments() {
    let id = DMatrix::identity(1, 1);
    assert_eq!(wick_product_expectation(&id, &[f(0, 4, false)]).unwrap(), 3.0);
    assert_eq!(wick_product_expectation(&id, &[f(0, 3, false)]).unwrap(), 0.0);
    let rho = 0.3;
    let c = DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]);
    let v = wick_product_expectation(&c, &[f(0, 2, true), f(1, 2, true)]).unwrap();
    assert!((v - 2.0 * rho * rho).abs() < 1e-16);
    let p = pairing_polynomial(&[f(0, 3, true), f(1, 3, true)]).unwrap();
    assert_eq!(p.terms, vec![(6, vec![((0, 1), 3)])]);
}

#[test]
fn wick_orthogonality_exact() {
    for n in 0..=12u32 {
        for m in 0..=(12 - n) {
            let p = pairing_polynomial(&[f(0, n, true), f(1, m, true)]).unwrap();
            if n == m {
                if n == 0 {
                    assert_eq!(p.terms, vec![(1, vec![])]);
                } else {
                    assert_eq!(p.terms, vec![(factorial(n), vec![((0, 1), n)])]);
                }
            } else {
                assert!(p.terms.is_empty(), "n={n} m={m}");
            }
        }
    }
}

#[test]
fn plain_moments_are_double_factorials() {
    for n in (0..=12u32).step_by(2) {
        let p = pairing_polynomial(&[f(0, n, false)]).unwrap();
        let want: u64 = (1..n as u64).step_by(2).product();
        assert_eq!(p.count(), want);
    }
}

#[test]
fn monte_carlo_cubic() {
    let rho = 0.6;
    let c = DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]);
    let (m, se) = wick_monte_carlo(&c, &[f(0, 3, true), f(1, 3, true)], 1_000_000, 42).unwrap();
    let want = 6.0 * rho.powi(3);
    assert!((m - want).abs() <= 3.0 * se, "{m} ± {se} vs {want}");
    let again = wick_monte_carlo(&c, &[f(0, 3, true), f(1, 3, true)], 1_000_000, 42).unwrap();
    assert_eq!((m, se), again);
}

#[test]
fn interactions() {
    let net = GaussianNetwork::cycle(8, 1.0).unwrap();
    let s2 = wick_interaction(&net, &[0.0, 0.0, 1.0], 200_000, 1).unwrap();
    assert!(s2.mean_s.abs() <= 3.0 * s2.se_s);
    let s4 = wick_interaction(&net, &[0.0, 0.0, 0.0, 0.0, 1.0], 1_000_000, 2).unwrap();
    assert!(s4.mean_s.abs() <= 3.0 * s4.se_s, "{} ± {}", s4.mean_s, s4.se_s);
    let a = 0.05;
    let q = wick_interaction(&net, &[0.0, 0.0, a], 400_000, 3).unwrap();
    let exact = wick_quadratic_exact(&net, a).unwrap();
    assert!(!q.divergent);
    assert!((q.mean_exp - exact).abs() <= 3.0 * q.se_exp, "{} ± {} vs {exact}", q.mean_exp, q.se_exp);
}

#[test]
fn quadratic_formula_by_diagonalization() {
    // single vertex with variance v: E[e^{−a(X² − v)}] = e^{av}/√(1 + 2av)
    let net = GaussianNetwork::from_weighted(1, &[], &[4.0]).unwrap();
    let (a, v) = (0.3f64, 0.25f64);
    let want = (a * v).exp() / (1.0 + 2.0 * a * v).sqrt();
    assert!((wick_quadratic_exact(&net, a).unwrap() - want).abs() < 1e-15);
    assert!(wick_quadratic_exact(&net, -3.0).is_err());
}

#[test]
fn sampler_covariance() {
    let net = GaussianNetwork::path(4, 1.0).unwrap();
    let s = sample_field(&net, 200_000, 9).unwrap();
    let c = covariance(&net).unwrap();
    let emp = s.samples.transpose() * &s.samples / 200_000.0;
    assert!((emp - c).amax() < 0.01);
    assert_eq!(sample_field(&net, 10, 9).unwrap(), sample_field(&net, 10, 9).unwrap());
}
