use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use fieldlab_numerics::{extrapolate, gauss_legendre, Basis, QuadratureRule};

use crate::conical::ConicalSurfaceData;
use crate::{AnomalyError, Result};

fn rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(12, 0.0, 1.0).expect("fixed rule"))
}

/// ∫₀^r e^{σ(ρ)} dρ for σ(ρ) = γ log ρ + (regular). Dyadic annuli down to
/// a relative weight of 1e-15; the innermost piece uses the leading power.
pub fn radial_length<F: Fn(f64) -> f64>(sigma: &F, gamma: f64, r: f64) -> f64 {
    let levels = ((50.0 / (gamma + 1.0)).ceil() as usize).clamp(8, 400);
    let rule = rule();
    let mut total = 0.0;
    let mut b = r;
    for _ in 0..levels {
        let a = 0.5 * b;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let rho = a + (b - a) * t;
            total += (b - a) * w * sigma(rho).exp();
        }
        b = a;
    }
    total + sigma(b).exp() * b / (gamma + 1.0)
}

/// Radius δ ≤ max_radius with radial_length(δ) = ε. Newton in t = δ^{γ+1},
/// where the length is nearly linear, kept inside a bisection bracket.
pub fn solve_radius<F: Fn(f64) -> f64>(
    sigma: &F,
    gamma: f64,
    phi0: f64,
    eps: f64,
    max_radius: f64,
) -> Result<f64> {
    let k = gamma + 1.0;
    if radial_length(sigma, gamma, max_radius) < eps {
        return Err(AnomalyError::Precondition(format!(
            "ε = {eps:e} exceeds the g̃-length of a radius-{max_radius:e} ray"
        )));
    }
    let (mut lo, mut hi) = (0.0, max_radius.powf(k));
    let mut t = (k * eps * (-phi0).exp()).clamp(f64::MIN_POSITIVE, hi);
    for _ in 0..200 {
        let d = t.powf(1.0 / k);
        let f = radial_length(sigma, gamma, d) - eps;
        if f.abs() <= 1e-15 * eps {
            return Ok(d);
        }
        let slope = sigma(d).exp() * d.powf(-gamma) / k;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let mut next = t - f / slope;
        if (next - t).abs() <= 1e-15 * t || hi - lo <= 1e-15 * hi {
            return Ok(next.powf(1.0 / k));
        }
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        t = next;
    }
    Err(AnomalyError::Quadrature(format!("disk radius for ε = {eps:e} did not converge")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialDistance {
    pub alpha: f64,
    pub r: Vec<f64>,
    pub length: Vec<f64>,
    /// lim length/r^{γ+1}, by Richardson in r.
    pub coefficient: f64,
    /// e^{φ(z₀)}/(γ+1).
    pub predicted: f64,
    pub rel_err: f64,
    /// Log-log slope of |length − coefficient·r^{γ+1}| over the grid.
    pub remainder_exponent: f64,
}

/// g̃-length along the round geodesic ray from cone `j` in direction α.
pub fn cone_radial_distance(
    data: &ConicalSurfaceData,
    j: usize,
    r_grid: &[f64],
    alpha: f64,
) -> Result<RadialDistance> {
    let (point, gamma) = data.cone(j)?;
    if r_grid.len() < 3 {
        return Err(AnomalyError::InvalidArgument("need at least three radii".into()));
    }
    let chart = data.chart_radius();
    if r_grid.iter().any(|&r| !(r > 0.0 && r < chart)) {
        return Err(AnomalyError::Precondition(format!("radii must lie in (0, {chart})")));
    }
    let frame = point.frame();
    let sigma = |rho: f64| data.sigma.value_polar(j, &frame, rho, alpha);
    let mut r: Vec<f64> = r_grid.to_vec();
    r.sort_by(|a, b| b.total_cmp(a));
    let length: Vec<f64> = r.iter().map(|&x| radial_length(&sigma, gamma, x)).collect();
    let ratios: Vec<(f64, f64)> = r
        .iter()
        .zip(&length)
        .map(|(&x, &l)| (x, l / x.powf(gamma + 1.0)))
        .collect();
    let basis: Vec<Basis> = (1..ratios.len()).map(|k| Basis::Power(k as f64)).collect();
    let ex = extrapolate(&ratios, &basis)?;
    let predicted = data.regular_potential(j)?.exp() / (gamma + 1.0);
    let rem: Vec<(f64, f64)> = r
        .iter()
        .zip(&length)
        .map(|(&x, &l)| (x.ln(), (l - ex.value * x.powf(gamma + 1.0)).abs().max(1e-300).ln()))
        .collect();
    let remainder_exponent = slope(&rem);
    Ok(RadialDistance {
        alpha,
        coefficient: ex.value,
        rel_err: (ex.value - predicted).abs() / predicted,
        predicted,
        r,
        length,
        remainder_exponent,
    })
}

/// Least-squares slope of y against x.
pub(crate) fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
