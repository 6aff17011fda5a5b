use serde::{Deserialize, Serialize};

use crate::quad::{cap_radius, core_radius};
use crate::sphere::{SphereFn, SpherePoint};
use crate::{AnomalyError, Result};

/// g̃ = e^{2σ}·g_FS on the Riemann sphere. The chordal logarithms of σ
/// are the cone points; the divisor is read off them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicalSurfaceData {
    pub sigma: SphereFn,
}

impl ConicalSurfaceData {
    pub fn new(sigma: SphereFn) -> Result<Self> {
        sigma.validate()?;
        let mut merged: Vec<crate::sphere::ChordalLog> = Vec::new();
        for c in &sigma.cones {
            if let Some(m) = merged
                .iter_mut()
                .find(|m| crate::sphere::geodesic_distance(m.point.0, c.point.0) < 1e-12)
            {
                m.gamma += c.gamma;
            } else {
                merged.push(*c);
            }
        }
        merged.retain(|c| c.gamma != 0.0);
        for c in &merged {
            if !(c.gamma > -1.0) {
                return Err(AnomalyError::InvalidArgument(format!(
                    "cone exponent {} must exceed −1",
                    c.gamma
                )));
            }
        }
        let points: Vec<SpherePoint> = merged.iter().map(|c| c.point).collect();
        if points.len() > 1 {
            cap_radius(&points)?;
        }
        Ok(ConicalSurfaceData {
            sigma: SphereFn { cones: merged, ..sigma },
        })
    }

    /// Smooth metric e^{2u}·g_FS.
    pub fn smooth(u: SphereFn) -> Result<Self> {
        if !u.is_smooth() {
            return Err(AnomalyError::InvalidArgument("expected a smooth factor".into()));
        }
        Self::new(u)
    }

    /// Pull-back of g_FS under z ↦ z^d.
    pub fn power_pullback(d: u32) -> Result<Self> {
        Self::new(crate::sphere::power_pullback(d)?)
    }

    pub fn divisor(&self) -> Vec<(SpherePoint, f64)> {
        self.sigma.cones.iter().map(|c| (c.point, c.gamma)).collect()
    }

    pub fn cone(&self, j: usize) -> Result<(SpherePoint, f64)> {
        self.sigma
            .cones
            .get(j)
            .map(|c| (c.point, c.gamma))
            .ok_or_else(|| AnomalyError::InvalidArgument(format!("no cone point {j}")))
    }

    /// e^{2h}·g̃.
    pub fn rescaled(&self, h: &SphereFn) -> Result<Self> {
        if !h.is_smooth() {
            return Err(AnomalyError::InvalidArgument("h must be smooth".into()));
        }
        Self::new(self.sigma.plus(h))
    }

    /// Cap radius around the cone points (1 for a single point).
    pub fn chart_radius(&self) -> f64 {
        let pts: Vec<SpherePoint> = self.sigma.cones.iter().map(|c| c.point).collect();
        if pts.len() > 1 {
            cap_radius(&pts).unwrap_or(0.0)
        } else {
            1.0
        }
    }

    /// Largest disk radius, in the round metric, the quadrature accepts.
    pub fn core_radius(&self) -> f64 {
        core_radius(self.chart_radius())
    }

    /// φ_j(z_j) in σ = γ_j log d_FS(·, z_j) + φ_j.
    pub fn regular_potential(&self, j: usize) -> Result<f64> {
        let (p, _) = self.cone(j)?;
        Ok(self.sigma.value_without(p.0, j))
    }

    pub fn degree(&self) -> f64 {
        self.sigma.cones.iter().map(|c| c.gamma).sum()
    }
}
