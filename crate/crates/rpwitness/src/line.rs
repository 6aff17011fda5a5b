use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use fieldlab_numerics::gauss_legendre;

use crate::bump::Bump;
use crate::certificate::{WitnessCertificate, WitnessParams};
use crate::{Result, RpError, NEGATIVE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinePairing {
    pub n: usize,
    pub kappa: f64,
    pub value: f64,
    pub error_estimate: f64,
}

fn cut_integral(bump: &Bump, kappa: f64, n: usize, nodes: usize) -> Result<f64> {
    // (Fh)² = ξ^{4n}(A² − B² + 2iAB); the odd part drops out on [−1, 1]
    let rule = gauss_legendre(nodes, 0.0, 1.0)?;
    let p = 4 * n as i32;
    Ok(2.0
        * rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| {
                let (a, b) = bump.fourier(x);
                w * x.powi(p) * (a * a - b * b) / (x * x + kappa)
            })
            .sum::<f64>())
}

/// ∫_{−1}^{1} (Fh)(ξ)² dξ/(ξ² + κ) for h = φ^{(2n)}; the derivatives act
/// as the multiplier (−iξ)^{2n}.
pub fn line_pairing(bump: &Bump, kappa: f64, n: usize) -> Result<LinePairing> {
    if !(kappa > 0.0) {
        return Err(RpError::InvalidArgument("κ must be positive".into()));
    }
    let coarse = cut_integral(bump, kappa, n, 96)?;
    let fine = cut_integral(bump, kappa, n, 192)?;
    Ok(LinePairing {
        n,
        kappa,
        value: fine,
        error_estimate: (fine - coarse).abs() + 1e-15 * fine.abs(),
    })
}

/// Same pairing with the full weight over ℝ: π(∫h e^{−√κx})²/√κ ≥ 0.
pub fn line_pairing_uncut(bump: &Bump, kappa: f64, n: usize) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(RpError::InvalidArgument("κ must be positive".into()));
    }
    let m = kappa.sqrt();
    // ∫φ^{(2n)}e^{−mx} = m^{2n}∫φe^{−mx}
    let lap = m.powi(2 * n as i32) * bump.laplace(m);
    Ok(PI * lap * lap / m)
}

/// Smallest n ≤ n_max with a certified negative pairing for φ = standard bump.
pub fn line_witness(kappa: f64, n_max: usize) -> Result<WitnessCertificate> {
    let bump = Bump::standard();
    let trend: Vec<LinePairing> = (0..=n_max)
        .into_par_iter()
        .map(|n| line_pairing(&bump, kappa, n))
        .collect::<Result<_>>()?;
    let hit = trend
        .iter()
        .find(|p| p.value < -(NEGATIVE_TOL + 10.0 * p.error_estimate));
    let data: Vec<(usize, f64)> = trend.iter().map(|p| (p.n, p.value)).collect();
    let Some(p) = hit else {
        return Err(RpError::NotFound { n_max, trend: data });
    };
    let n = p.n;
    Ok(WitnessCertificate {
        params: WitnessParams::LineDerivative { kappa, n, bump },
        pairing_value: p.value,
        error_estimate: p.error_estimate,
        tolerance: NEGATIVE_TOL + 10.0 * p.error_estimate,
        negative: true,
        uncut_pairing: line_pairing_uncut(&bump, kappa, n)?,
        target: None,
        trend: data.into_iter().take(n + 1).collect(),
        diagnostics: Vec::new(),
    })
}
