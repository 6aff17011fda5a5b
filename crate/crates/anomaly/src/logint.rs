use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::quad::{converged, integrate, integrate_annulus, Cap, SphereQuad};
use crate::radial::slope;
use crate::sphere::{dot, SphereFn, Vec3};
use crate::{AnomalyError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LogIntegralKind {
    /// ∫_{S∖B_δ}|∇σ|² against −2πγ² log δ − 2πγφ(z₀) − ∫σΔσ.
    DiskEnergy,
    /// ∫_{δ<ρ<Qδ}|∇σ|² against 2πγ² log Q.
    Annulus { ratio: f64 },
    /// ∫_{S∖B_δ}(∇h·∇σ + hΔσ) against −2πγh(z₀).
    GreenStokes { h: SphereFn },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogIntegralRow {
    pub delta: f64,
    pub value: f64,
    pub predicted: f64,
    pub residual: f64,
    pub quadrature_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogIntegralReport {
    pub rows: Vec<LogIntegralRow>,
    /// Log-log slope of |residual| against δ.
    pub rate: f64,
}

/// Excised integrals around cone `j` of σ, radius δ in the round metric.
pub fn log_integral_asymptotics(
    sigma: &SphereFn,
    j: usize,
    kind: &LogIntegralKind,
    deltas: &[f64],
    q: &SphereQuad,
) -> Result<LogIntegralReport> {
    sigma.validate()?;
    let cone = *sigma
        .cones
        .get(j)
        .ok_or_else(|| AnomalyError::InvalidArgument(format!("no cone point {j}")))?;
    if deltas.len() < 2 || deltas.iter().any(|&d| !(d > 0.0 && d < 0.2)) {
        return Err(AnomalyError::InvalidArgument("need two or more radii in (0, 0.2)".into()));
    }
    let global = !matches!(kind, LogIntegralKind::Annulus { .. });
    if global && sigma.cones.len() != 1 {
        return Err(AnomalyError::Precondition(
            "whole-sphere integrals need exactly one cone point".into(),
        ));
    }
    let (n, gamma) = (cone.point, cone.gamma);
    let frame = n.frame();
    let phi = sigma.value_without(n.0, j);
    let pointwise = |p: Vec3| -> f64 {
        let (_, g, l) = sigma.eval(p);
        match kind {
            LogIntegralKind::DiskEnergy | LogIntegralKind::Annulus { .. } => dot(g, g),
            LogIntegralKind::GreenStokes { h } => {
                let (hv, gh, _) = h.eval(p);
                dot(gh, g) + hv * l
            }
        }
    };
    let polar = |rho: f64, alpha: f64| -> f64 {
        let (_, g, l) = sigma.eval_polar(j, &frame, rho, alpha);
        match kind {
            LogIntegralKind::DiskEnergy | LogIntegralKind::Annulus { .. } => dot(g, g),
            LogIntegralKind::GreenStokes { h } => {
                let (hv, gh, _) = h.eval(n.ray(&frame, rho, alpha));
                dot(gh, g) + hv * l
            }
        }
    };
    let excised = |delta: f64, f: &(dyn Fn(Vec3) -> f64 + Sync), loc: &(dyn Fn(f64, f64) -> f64 + Sync)| {
        let inner = move |_: f64| delta;
        let caps = [Cap { center: n, inner: &inner, local: Some(loc) }];
        converged(q, 0.0, |qq| integrate(f, &caps, qq))
    };
    let background = match kind {
        LogIntegralKind::DiskEnergy => {
            let f = |p: Vec3| {
                let (s, _, l) = sigma.eval(p);
                s * l
            };
            let loc = |r: f64, a: f64| {
                let (s, _, l) = sigma.eval_polar(j, &frame, r, a);
                s * l
            };
            excised(1e-13, &f, &loc)?.0
        }
        _ => 0.0,
    };
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let (value, err, predicted) = match kind {
            LogIntegralKind::DiskEnergy => {
                let (v, e) = excised(delta, &pointwise, &polar)?;
                (v, e, -2.0 * PI * gamma * (gamma * delta.ln() + phi) - background)
            }
            LogIntegralKind::GreenStokes { h } => {
                if !h.is_smooth() {
                    return Err(AnomalyError::InvalidArgument("h must be smooth".into()));
                }
                let (v, e) = excised(delta, &pointwise, &polar)?;
                (v, e, -2.0 * PI * gamma * h.value(n.0))
            }
            LogIntegralKind::Annulus { ratio } => {
                if !(*ratio > 1.0) || delta * ratio >= 0.45 * sigma_chart(sigma) {
                    return Err(AnomalyError::InvalidArgument(
                        "annulus must have ratio > 1 and stay clear of other cones".into(),
                    ));
                }
                let (lo, hi) = (move |_: f64| delta, move |_: f64| delta * ratio);
                let (v, e) = converged(q, 0.0, |qq| integrate_annulus(&polar, &lo, &hi, qq))?;
                (v, e, 2.0 * PI * gamma * gamma * ratio.ln())
            }
        };
        rows.push(LogIntegralRow {
            delta,
            value,
            predicted,
            residual: value - predicted,
            quadrature_error: err,
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.delta.ln(), r.residual.abs().max(1e-300).ln()))
        .collect();
    Ok(LogIntegralReport { rate: slope(&pts), rows })
}

fn sigma_chart(sigma: &SphereFn) -> f64 {
    let pts: Vec<_> = sigma.cones.iter().map(|c| c.point).collect();
    if pts.len() > 1 {
        crate::quad::cap_radius(&pts).map(|r| r / 0.45).unwrap_or(0.0)
    } else {
        PI
    }
}
