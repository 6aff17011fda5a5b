use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use fieldlab_numerics::{extrapolate, Basis, ExtrapolationResult};

use crate::conical::ConicalSurfaceData;
use crate::quad::{converged, integrate, Cap, SphereQuad};
use crate::radial::{slope, solve_radius};
use crate::sphere::{dot, SphereFn, Vec3};
use crate::{AnomalyError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalyValue {
    pub value: f64,
    pub quadrature_error: f64,
    pub epsilon_extrapolation: Option<ExtrapolationResult>,
}

fn require_smooth(f: &SphereFn, what: &str) -> Result<()> {
    if !f.is_smooth() {
        return Err(AnomalyError::InvalidArgument(format!("{what} must be smooth")));
    }
    f.validate()
}

/// A(e^{2σ}g, g) with g = e^{2u}·g_FS:
/// (1/24π)∫(|∇σ|² + 2(1 − Δu)σ) dV_FS.
pub fn anomaly_smooth(sigma: &SphereFn, reference: &SphereFn, q: &SphereQuad) -> Result<AnomalyValue> {
    require_smooth(sigma, "σ")?;
    require_smooth(reference, "reference factor")?;
    let f = |p: Vec3| {
        let (s, gs, _) = sigma.eval(p);
        let (_, _, lu) = reference.eval(p);
        dot(gs, gs) + 2.0 * (1.0 - lu) * s
    };
    let (v, e) = converged(q, 0.0, |qq| integrate(&f, &[], qq))?;
    Ok(AnomalyValue {
        value: v / (24.0 * PI),
        quadrature_error: e / (24.0 * PI),
        epsilon_extrapolation: None,
    })
}

/// Geometric ε ladder, largest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsLadder {
    pub eps: Vec<f64>,
}

impl EpsLadder {
    pub fn geometric(first: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(first > 0.0 && ratio > 0.0 && ratio < 1.0) || count < 3 {
            return Err(AnomalyError::InvalidArgument(
                "need first > 0, 0 < ratio < 1 and at least three points".into(),
            ));
        }
        Ok(EpsLadder {
            eps: (0..count).map(|k| first * ratio.powi(k as i32)).collect(),
        })
    }
}

impl EpsLadder {
    /// Six points from the g̃-length of a ray to a quarter of the chart
    /// core, capped at 1e-2, ratio 1/4.
    pub fn fitted(data: &ConicalSurfaceData) -> Result<Self> {
        let r = 0.25 * data.core_radius();
        let mut first: f64 = 1e-2;
        for (j, (p, g)) in data.divisor().into_iter().enumerate() {
            let frame = p.frame();
            let s = |rho: f64| data.sigma.value_polar(j, &frame, rho, 0.0);
            first = first.min(crate::radial::radial_length(&s, g, r));
        }
        EpsLadder::geometric(first, 0.25, 6)
    }
}

impl Default for EpsLadder {
    fn default() -> Self {
        EpsLadder::geometric(1e-2, 0.25, 6).expect("static ladder")
    }
}

/// One row of the ε sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsSample {
    pub eps: f64,
    /// (1/24π)·∫ over the complement of the g̃-disks, no counterterm.
    pub raw: f64,
    /// raw + (1/12)Σγ²/(1+γ)·log ε.
    pub renormalized: f64,
    pub quadrature_error: f64,
}

/// (1/12)Σ γ²/(1+γ): the log ε coefficient of the counterterm.
pub fn counterterm_coefficient(data: &ConicalSurfaceData) -> f64 {
    data.divisor().iter().map(|&(_, g)| g * g / (1.0 + g)).sum::<f64>() / 12.0
}

/// Samples of the excised integral along the ladder. Disk radii are
/// measured in g̃ along round geodesic rays from each cone point.
pub fn epsilon_sequence(
    data: &ConicalSurfaceData,
    reference: &SphereFn,
    ladder: &EpsLadder,
    q: &SphereQuad,
) -> Result<Vec<EpsSample>> {
    require_smooth(reference, "reference factor")?;
    if ladder.eps.windows(2).any(|w| !(w[1] < w[0])) || ladder.eps.iter().any(|&e| !(e > 0.0)) {
        return Err(AnomalyError::InvalidArgument("ε ladder must be positive and decreasing".into()));
    }
    let sigma = data.sigma.minus(reference);
    let f = |p: Vec3| {
        let (s, gs, _) = sigma.eval(p);
        let (_, _, lu) = reference.eval(p);
        dot(gs, gs) + 2.0 * (1.0 - lu) * s
    };
    let cones = data.divisor();
    let local = |j: usize| {
        let (sigma, frame, n) = (&sigma, cones[j].0.frame(), cones[j].0);
        move |rho: f64, alpha: f64| {
            let (s, gs, _) = sigma.eval_polar(j, &frame, rho, alpha);
            let (_, _, lu) = reference.eval(n.ray(&frame, rho, alpha));
            dot(gs, gs) + 2.0 * (1.0 - lu) * s
        }
    };
    let phis: Vec<f64> = (0..cones.len())
        .map(|j| data.regular_potential(j))
        .collect::<Result<_>>()?;
    let frames: Vec<_> = cones.iter().map(|(p, _)| p.frame()).collect();
    let core = data.core_radius();
    let coef = counterterm_coefficient(data);
    ladder
        .eps
        .par_iter()
        .map(|&eps| {
            let radius = |j: usize, alpha: f64| -> Result<f64> {
                let g = cones[j].1;
                let s = |rho: f64| data.sigma.value_polar(j, &frames[j], rho, alpha);
                solve_radius(&s, g, phis[j], eps, 0.999 * core)
            };
            let failure = std::sync::Mutex::new(None);
            let inner: Vec<Box<dyn Fn(f64) -> f64 + Sync>> = (0..cones.len())
                .map(|j| {
                    let (r, failure) = (radius, &failure);
                    Box::new(move |a: f64| {
                        r(j, a).unwrap_or_else(|e| {
                            failure.lock().unwrap().get_or_insert(e);
                            f64::INFINITY
                        })
                    }) as Box<dyn Fn(f64) -> f64 + Sync>
                })
                .collect();
            let locals: Vec<_> = (0..cones.len()).map(|j| local(j)).collect();
            let caps: Vec<Cap<'_>> = cones
                .iter()
                .zip(&inner)
                .zip(&locals)
                .map(|((&(p, _), r), l)| Cap { center: p, inner: r.as_ref(), local: Some(l) })
                .collect();
            let run = converged(q, 0.0, |qq| integrate(&f, &caps, qq));
            if let Some(e) = failure.lock().unwrap().take() {
                return Err(e);
            }
            let (v, e) = run?;
            let raw = v / (24.0 * PI);
            Ok(EpsSample {
                eps,
                raw,
                renormalized: raw + coef * eps.ln(),
                quadrature_error: e / (24.0 * PI),
            })
        })
        .collect()
}

/// Power p with remainders O(ε^p log ε): δ ~ ε^{1/(γ+1)} and the disk
/// remainder is δ^{2min(γ,0)+2}.
fn remainder_power(data: &ConicalSurfaceData) -> f64 {
    data.divisor()
        .iter()
        .map(|&(_, g)| (2.0 * g.min(0.0) + 2.0) / (g + 1.0))
        .fold(f64::INFINITY, f64::min)
}

/// ℛA(g̃, g), g = e^{2u}·g_FS, extrapolated to ε → 0.
pub fn anomaly_renormalized(
    data: &ConicalSurfaceData,
    reference: &SphereFn,
    ladder: &EpsLadder,
    q: &SphereQuad,
) -> Result<AnomalyValue> {
    if data.divisor().is_empty() {
        return anomaly_smooth(&data.sigma.minus(reference), reference, q);
    }
    let seq = epsilon_sequence(data, reference, ladder, q)?;
    let p = remainder_power(data);
    let samples: Vec<(f64, f64)> = seq.iter().map(|s| (s.eps.powf(p), s.renormalized)).collect();
    let basis = [Basis::PowerLog(1.0), Basis::Power(1.0), Basis::PowerLog(2.0), Basis::Power(2.0)];
    let ex = extrapolate(&samples, &basis)?;
    if !ex.converged {
        return Err(AnomalyError::Extrapolation(format!("stages {:?}", ex.stages)));
    }
    Ok(AnomalyValue {
        value: ex.value,
        quadrature_error: seq.iter().map(|s| s.quadrature_error).fold(0.0, f64::max),
        epsilon_extrapolation: Some(ex),
    })
}

/// ℛA(e^{2h}g̃, g̃) = (1/24π)∫_{S∖D}(|∇h|² + 2(1 − Δσ)h) dV_FS, with Δσ
/// the pointwise (regular) Laplacian.
pub fn anomaly_regular_conical(h: &SphereFn, data: &ConicalSurfaceData, q: &SphereQuad) -> Result<AnomalyValue> {
    require_smooth(h, "h")?;
    let f = |p: Vec3| {
        let (hv, gh, _) = h.eval(p);
        let (_, _, ls) = data.sigma.eval(p);
        dot(gh, gh) + 2.0 * (1.0 - ls) * hv
    };
    // the regular Laplacian of a chordal log is constant, so no caps needed
    let (v, e) = converged(q, 0.0, |qq| integrate(&f, &[], qq))?;
    Ok(AnomalyValue {
        value: v / (24.0 * PI),
        quadrature_error: e / (24.0 * PI),
        epsilon_extrapolation: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub ra_scaled: f64,
    pub ra_base: f64,
    pub ra_regular: f64,
    /// (1/12)Σ γ(γ+2)/(γ+1)·h(z_j).
    pub correction: f64,
    pub residual: f64,
    pub error_budget: f64,
}

/// ℛA(e^{2h}g̃, g) − ℛA(g̃, g) − ℛA(e^{2h}g̃, g̃) + (1/12)Σγ(γ+2)/(γ+1)h(z_j).
pub fn conical_scaling_check(
    data: &ConicalSurfaceData,
    h: &SphereFn,
    reference: &SphereFn,
    ladder: &EpsLadder,
    q: &SphereQuad,
) -> Result<ScalingReport> {
    let scaled = data.rescaled(h)?;
    let a1 = anomaly_renormalized(&scaled, reference, ladder, q)?;
    let a0 = anomaly_renormalized(data, reference, ladder, q)?;
    let ar = anomaly_regular_conical(h, data, q)?;
    let correction: f64 = data
        .divisor()
        .iter()
        .map(|&(p, g)| g * (g + 2.0) / (g + 1.0) * h.value(p.0))
        .sum::<f64>()
        / 12.0;
    let err = |a: &AnomalyValue| {
        a.quadrature_error + a.epsilon_extrapolation.as_ref().map_or(0.0, |e| e.error_estimate)
    };
    Ok(ScalingReport {
        ra_scaled: a1.value,
        ra_base: a0.value,
        ra_regular: ar.value,
        correction,
        residual: a1.value - a0.value - ar.value + correction,
        error_budget: err(&a1) + err(&a0) + err(&ar),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountertermSlope {
    pub slope: f64,
    /// −(1/12)Σγ²/(1+γ).
    pub predicted: f64,
    pub rel_err: f64,
    pub samples: Vec<EpsSample>,
}

/// Slope of the un-renormalized sequence against log ε.
pub fn counterterm_slope(
    data: &ConicalSurfaceData,
    reference: &SphereFn,
    ladder: &EpsLadder,
    q: &SphereQuad,
) -> Result<CountertermSlope> {
    if data.divisor().is_empty() {
        return Err(AnomalyError::InvalidArgument("no cone points".into()));
    }
    let samples = epsilon_sequence(data, reference, ladder, q)?;
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.eps.ln(), s.raw)).collect();
    let s = slope(&pts);
    let predicted = -counterterm_coefficient(data);
    Ok(CountertermSlope {
        slope: s,
        predicted,
        rel_err: ((s - predicted) / predicted).abs(),
        samples,
    })
}
