use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{NumericsError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadKind {
    Legendre,
    HermiteWeighted,
    PeriodicTrapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interval {
    Finite(f64, f64),
    Line,
    /// A circle of the given circumference.
    Circle(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadKind,
    pub interval: Interval,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre P_n and P_n' at x via the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// n-point Gauss–Legendre rule on [a, b], nodes ascending.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(NumericsError::InvalidArgument("n must be positive".into()));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(NumericsError::InvalidArgument(format!(
            "need finite a < b, got [{a}, {b}]"
        )));
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_pair(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // roots come out descending in x; mirror into ascending slots
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = mid;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: QuadKind::Legendre,
        interval: Interval::Finite(a, b),
    })
}

/// Equispaced rule on a circle of circumference `period`; exact for
/// trigonometric polynomials of degree < n.
pub fn periodic_trapezoid(n: usize, period: f64) -> Result<QuadratureRule> {
    if n == 0 || !(period > 0.0) {
        return Err(NumericsError::InvalidArgument(
            "need n >= 1 and positive period".into(),
        ));
    }
    let h = period / n as f64;
    Ok(QuadratureRule {
        nodes: (0..n).map(|k| k as f64 * h).collect(),
        weights: vec![h; n],
        kind: QuadKind::PeriodicTrapezoid,
        interval: Interval::Circle(period),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_is_midpoint() {
        let r = gauss_legendre(1, -1.0, 1.0).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_points_integrate_square() {
        let r = gauss_legendre(2, -1.0, 1.0).unwrap();
        assert!((r.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exp_on_unit_interval() {
        let r = gauss_legendre(20, 0.0, 1.0).unwrap();
        let exact = std::f64::consts::E - 1.0;
        assert!((r.integrate(f64::exp) - exact).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gauss_legendre(0, 0.0, 1.0).is_err());
        assert!(gauss_legendre(3, 1.0, 1.0).is_err());
        assert!(gauss_legendre(3, 2.0, 1.0).is_err());
    }

    #[test]
    fn large_rule_is_ordered_and_positive() {
        let r = gauss_legendre(801, -8.0, 8.0).unwrap();
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!((r.weights.iter().sum::<f64>() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_is_spectral_on_trig() {
        let r = periodic_trapezoid(16, 2.0 * PI).unwrap();
        assert!((r.integrate(|x| (3.0 * x).cos().powi(2)) - PI).abs() < 1e-14);
    }
}
