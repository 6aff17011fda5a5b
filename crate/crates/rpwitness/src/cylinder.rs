use std::f64::consts::PI;

use fieldlab_numerics::gauss_legendre;

use crate::bump::Bump;
use crate::certificate::{WitnessCertificate, WitnessParams};
use crate::line::line_witness;
use crate::{Result, RpError, NEGATIVE_TOL};

fn check(lambda: f64, length: f64) -> Result<()> {
    if !(lambda >= 1.0) {
        return Err(RpError::InvalidArgument("Λ must be at least 1".into()));
    }
    if !(length > 0.0) {
        return Err(RpError::InvalidArgument("slice length must be positive".into()));
    }
    Ok(())
}

fn pairing_at(bump: &Bump, lambda: f64, n: usize, nodes: usize) -> Result<f64> {
    // f(t, x) = √Λ h(√Λ t)/√L, h = φ^{(2n)}: only the constant slice mode
    // (λ = 0) is excited and Ff(τ) = Fh(τ/√Λ)
    let r = lambda.sqrt();
    let rule = gauss_legendre(nodes, 0.0, r)?;
    let p = 4 * n as i32;
    Ok(2.0
        * rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&tau, &w)| {
                let s = tau / r;
                let (a, b) = bump.fourier(s);
                w * s.powi(p) * (a * a - b * b) / (tau * tau + 1.0)
            })
            .sum::<f64>())
}

/// ⟨Θf, Π_Λ(Δ + 1)⁻¹f⟩ on ℝ × (circle of length L), returned with an
/// error estimate.
pub fn cylinder_pairing(bump: &Bump, lambda: f64, length: f64, n: usize) -> Result<(f64, f64)> {
    check(lambda, length)?;
    let a = pairing_at(bump, lambda, n, 96)?;
    let b = pairing_at(bump, lambda, n, 192)?;
    Ok((b, (b - a).abs() + 1e-15 * b.abs()))
}

/// The same f against the un-cut covariance.
pub fn cylinder_pairing_uncut(bump: &Bump, lambda: f64, length: f64, n: usize) -> Result<f64> {
    check(lambda, length)?;
    // ∫f e^{−t}dt = Λ^{−n}∫φ(s)e^{−s/√Λ}ds
    let lap = lambda.powi(-(n as i32)) * bump.laplace(1.0 / lambda.sqrt());
    Ok(PI * lap * lap)
}

/// Uses the order n of the κ = 1 line witness.
pub fn cylinder_witness(lambda: f64, length: f64, n_max: usize) -> Result<WitnessCertificate> {
    check(lambda, length)?;
    let n = match line_witness(1.0, n_max)?.params {
        WitnessParams::LineDerivative { n, .. } => n,
        _ => unreachable!(),
    };
    let bump = Bump::standard();
    let (value, err) = cylinder_pairing(&bump, lambda, length, n)?;
    let tolerance = NEGATIVE_TOL + 10.0 * err;
    Ok(WitnessCertificate {
        params: WitnessParams::Cylinder { lambda, length, n, bump },
        pairing_value: value,
        error_estimate: err,
        tolerance,
        negative: value < -tolerance,
        uncut_pairing: cylinder_pairing_uncut(&bump, lambda, length, n)?,
        target: None,
        trend: vec![(n, value)],
        diagnostics: Vec::new(),
    })
}
