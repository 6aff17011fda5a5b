use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

use fieldlab_numerics::Spectrum;
use fieldlab_zeta::gamma::gamma_real;

use crate::kato::{Lambda0Curve, TwistedFamily};
use crate::{invalid, CoversError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatBoundReport {
    pub eps0: f64,
    pub c4: f64,
    pub p: u32,
    pub b: f64,
    /// max over (N, t) of (1/N)·Σ_{0<λ<ε₀} e^{−tλ} − C₄ t^{−1/2p}.
    pub max_violation: f64,
    pub violations: usize,
    pub checked: usize,
}

/// Checks (1/N)·Σ_{0<λ<ε₀} e^{−tλ} ≤ C₄ t^{−1/2p} with C₄ = Γ(1/2p)/(p·b^{1/2p})
/// on every cover in `n_list` and every t in `t_grid`. `eps0` defaults to
/// the curve's ½·min λ₁.
pub fn small_eigen_heat_bound<F: TwistedFamily + ?Sized>(
    family: &F,
    curve: &Lambda0Curve,
    eps0: Option<f64>,
    t_grid: &[f64],
    n_list: &[usize],
) -> Result<HeatBoundReport> {
    let floor = curve.lambda1.iter().copied().fold(f64::INFINITY, f64::min);
    let eps0 = eps0.unwrap_or(curve.eps0);
    if !(eps0 > 0.0) || eps0 >= floor {
        return Err(CoversError::EpsilonAboveFloor { eps0, floor });
    }
    if t_grid.iter().any(|t| !(*t > 0.0)) || n_list.contains(&0) {
        return invalid("t must be positive and N >= 1");
    }
    let pf = curve.p as f64;
    let c4 = gamma_real(1.0 / (2.0 * pf)) / (pf * curve.b.powf(1.0 / (2.0 * pf)));
    let mut max_violation = f64::NEG_INFINITY;
    let mut violations = 0;
    let mut checked = 0;
    for &n in n_list {
        let small = family.cover_small_eigenvalues(n, eps0)?;
        for &t in t_grid {
            let mut terms: Vec<f64> = small.iter().map(|l| (-t * l).exp()).collect();
            terms.sort_by(f64::total_cmp);
            let lhs = terms.iter().sum::<f64>() / n as f64;
            let gap = lhs - c4 * t.powf(-1.0 / (2.0 * pf));
            max_violation = max_violation.max(gap);
            if gap > 0.0 {
                violations += 1;
            }
            checked += 1;
        }
    }
    Ok(HeatBoundReport {
        eps0,
        c4,
        p: curve.p,
        b: curve.b,
        max_violation,
        violations,
        checked,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCount {
    pub lambdas: Vec<f64>,
    pub counts: Vec<usize>,
    /// count(λ ≤ Λ) / (vol·Λ^{d/2})
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

/// Eigenvalue counts normalized by vol·Λ^{d/2}. Λ must be ≥ 1 and inside
/// the listed part of the spectrum.
pub fn eigencount_check(sp: &Spectrum, vol: f64, dim: u32, lambda_grid: &[f64]) -> Result<EigenCount> {
    if !(vol > 0.0) || dim == 0 {
        return invalid("need vol > 0 and dim >= 1");
    }
    if lambda_grid.is_empty() {
        return invalid("empty Lambda grid");
    }
    let mut counts = Vec::new();
    let mut ratios = Vec::new();
    for &lam in lambda_grid {
        if !(lam >= 1.0) {
            return invalid(format!("Lambda must be >= 1, got {lam}"));
        }
        if lam > sp.truncation.complete_below {
            return invalid(format!(
                "Lambda {lam} above the complete range {}",
                sp.truncation.complete_below
            ));
        }
        let c = sp.eigenvalues.iter().filter(|&&v| v <= lam).count();
        counts.push(c);
        ratios.push(c as f64 / (vol * lam.powf(dim as f64 / 2.0)));
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(EigenCount {
        lambdas: lambda_grid.to_vec(),
        counts,
        ratios,
        max_ratio,
    })
}

/// e·sup_{Λ≥1} tr(e^{−Δ/Λ})/(vol·Λ^{d/2}) for flat tori whose periods are all
/// at least `min_period`: count(λ ≤ Λ) ≤ e·tr(e^{−Δ/Λ}) turns the heat trace
/// into a Weyl-form bound.
pub fn flat_weyl_constant(dim: u32, min_period: f64) -> Result<f64> {
    if dim == 0 || !(min_period > 0.0) {
        return invalid("need dim >= 1 and a positive period");
    }
    // per direction: (4πt)^{−½}·L·Σ_k e^{−k²L²/4t} at t = 1/Λ ≤ 1
    let c = min_period * min_period / 4.0;
    let mut s = 0.0;
    for k in (1..=64u32).rev() {
        s += (-c * (k * k) as f64).exp();
    }
    let per_dim = (1.0 + 2.0 * s) / (4.0 * PI).sqrt();
    Ok(E * per_dim.powi(dim as i32))
}
