use serde::{Deserialize, Serialize};

use crate::ball::{ball_pairing, BallParams};
use crate::bump::Bump;
use crate::compact::{compact_pairing, CompactParams};
use crate::cylinder::cylinder_pairing;
use crate::line::line_pairing;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    LineDerivative,
    Cylinder,
    CompactDual,
    FourierBall,
}

/// Everything needed to rebuild the test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "kebab-case")]
pub enum WitnessParams {
    LineDerivative {
        kappa: f64,
        n: usize,
        bump: Bump,
    },
    Cylinder {
        lambda: f64,
        length: f64,
        n: usize,
        bump: Bump,
    },
    CompactDual {
        params: CompactParams,
        lambda_star: f64,
        coefficients: Vec<f64>,
    },
    FourierBall {
        params: BallParams,
        coefficients: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub params: WitnessParams,
    /// ⟨Θf, Π_Λ(Δ + 1)⁻¹f⟩.
    pub pairing_value: f64,
    pub error_estimate: f64,
    /// The value is called negative only below −tolerance.
    pub tolerance: f64,
    pub negative: bool,
    /// Same f against (Δ + 1)⁻¹ without cutoff.
    pub uncut_pairing: f64,
    /// Closed-form or limiting value the construction aims at, if any.
    pub target: Option<f64>,
    /// (order or basis size, pairing) as the search progressed.
    pub trend: Vec<(usize, f64)>,
    /// Flags raised along the way, e.g. a non-monotone basis trend.
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl WitnessCertificate {
    pub fn construction(&self) -> Construction {
        match self.params {
            WitnessParams::LineDerivative { .. } => Construction::LineDerivative,
            WitnessParams::Cylinder { .. } => Construction::Cylinder,
            WitnessParams::CompactDual { .. } => Construction::CompactDual,
            WitnessParams::FourierBall { .. } => Construction::FourierBall,
        }
    }

    /// Recomputes the cut-off pairing from the stored parameters alone.
    pub fn reevaluate(&self) -> Result<f64> {
        match &self.params {
            WitnessParams::LineDerivative { kappa, n, bump } => {
                Ok(line_pairing(bump, *kappa, *n)?.value)
            }
            WitnessParams::Cylinder { lambda, length, n, bump } => {
                Ok(cylinder_pairing(bump, *lambda, *length, *n)?.0)
            }
            WitnessParams::CompactDual { params, coefficients, .. } => {
                compact_pairing(params, coefficients)
            }
            WitnessParams::FourierBall { params, coefficients } => {
                ball_pairing(params, coefficients)
            }
        }
    }

    /// |reevaluate − pairing_value|.
    pub fn verify(&self) -> Result<f64> {
        Ok((self.reevaluate()? - self.pairing_value).abs())
    }
}
