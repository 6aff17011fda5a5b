use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use fieldlab_numerics::{extrapolate, herm_eig, sym_eig, Basis, ExtrapolationResult, Spectrum};
use fieldlab_spectra::{
    cycle_cover_build, torus_spectrum, twisted_block_decompose, twisted_circle_spectrum,
    CoverGraph, TwistedCircle,
};
use fieldlab_zeta::{log_det_mellin, log_det_zeta};

use crate::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoverGeometry {
    Circle { length: f64 },
    /// Covers N·L1 × L2 of the flat torus L1 × L2, unrolled in the first direction.
    TorusStrip { l1: f64, l2: f64 },
    /// The cocycle on `graph` defines the cover; its `degree` is ignored.
    Graph(CoverGraph),
}

impl CoverGeometry {
    fn sheet_volume(&self) -> f64 {
        match self {
            CoverGeometry::Circle { length } => *length,
            CoverGeometry::TorusStrip { l1, l2 } => l1 * l2,
            CoverGeometry::Graph(g) => g.n_vertices as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverFreeEnergySeq {
    pub n_list: Vec<usize>,
    /// log det'_ζ(Δ_N) / vol(M_N) from the twisted-block product.
    pub values: Vec<f64>,
    pub block_log_det: Vec<f64>,
    pub direct_log_det: Vec<f64>,
    /// max_N |block − direct| / vol(M_N).
    pub max_route_gap: f64,
    pub limit_estimate: ExtrapolationResult,
}

fn circle_block(length: f64, mass: f64, theta: f64) -> Result<f64> {
    let sp = twisted_circle_spectrum(&TwistedCircle { length, mass, theta }, 4)?;
    Ok(log_det_zeta(&sp)?.log_det)
}

// Σ_{k∈Z} [L1·|2πk/L2| + log|1 − e^{iθ − L1|2πk/L2|}|²] with the linear part
// zeta-regularized to −πL1/(3L2); the untwisted k = 0 mode gives the
// circle's det' = L1².
fn torus_block(l1: f64, l2: f64, theta: f64) -> f64 {
    let mut acc = 0.0;
    let mut k = 1usize;
    loop {
        let x = (-l1 * 2.0 * PI * k as f64 / l2).exp();
        let term = (1.0 - 2.0 * theta.cos() * x + x * x).ln();
        acc += 2.0 * term;
        if x < 1e-18 {
            break;
        }
        k += 1;
    }
    let zero = if theta.cos() > 1.0 - 1e-15 {
        2.0 * l1.ln()
    } else {
        (2.0 - 2.0 * theta.cos()).ln()
    };
    -PI * l1 / (3.0 * l2) + zero + acc
}

fn finite_log_det(values: Vec<f64>) -> Result<f64> {
    Ok(log_det_zeta(&Spectrum::finite(values)?)?.log_det)
}

fn one_cover(geom: &CoverGeometry, m: f64, n: usize) -> Result<(f64, f64)> {
    let thetas: Vec<f64> = (0..n).map(|p| 2.0 * PI * p as f64 / n as f64).collect();
    match geom {
        CoverGeometry::Circle { length } => {
            let mut blocks = thetas
                .iter()
                .map(|&th| circle_block(*length, m, th))
                .collect::<Result<Vec<_>>>()?;
            blocks.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
            let direct = circle_block(n as f64 * length, m, 0.0)?;
            Ok((blocks.iter().sum(), direct))
        }
        CoverGeometry::TorusStrip { l1, l2 } => {
            let block = thetas.iter().map(|&th| torus_block(*l1, *l2, th)).sum();
            let sp = torus_spectrum(n as f64 * l1, *l2, 0.0, 2)?;
            Ok((block, log_det_mellin(&sp)?.log_det))
        }
        CoverGeometry::Graph(base) => {
            let g = CoverGraph {
                degree: n,
                ..base.clone()
            };
            let m2 = m * m;
            let mut block_vals = Vec::new();
            for b in twisted_block_decompose(&g)? {
                block_vals.extend(herm_eig(&b.laplacian)?.values.iter().map(|v| v + m2));
            }
            let cover = cycle_cover_build(&g)?;
            let direct_vals: Vec<f64> =
                sym_eig(&cover.laplacian)?.values.iter().map(|v| v + m2).collect();
            Ok((finite_log_det(block_vals)?, finite_log_det(direct_vals)?))
        }
    }
}

/// Massive covers converge exponentially in N, so no power-law model is
/// fitted: the last value is the estimate and the last step bounds its error.
fn gapped_limit(values: &[f64]) -> ExtrapolationResult {
    let last = values[values.len() - 1];
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let floor = 64.0 * f64::EPSILON * values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ExtrapolationResult {
        value: last,
        error_estimate: diffs[diffs.len() - 1].max(floor),
        orders_used: vec![],
        converged: diffs.windows(2).all(|w| w[1] <= w[0].max(floor)),
        stages: values.to_vec(),
    }
}

/// (1/vol)·log det' over a sequence of cyclic covers, by the twisted-block
/// product and by the cover's own spectrum. Massless limits are extrapolated
/// in h = 1/N with corrections h·log h, h, h².
pub fn free_energy_sequence(
    geom: &CoverGeometry,
    m: f64,
    n_list: &[usize],
) -> Result<CoverFreeEnergySeq> {
    if n_list.len() < 2 {
        return invalid("N_list needs at least two entries");
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
        return invalid("N_list must be positive and increasing");
    }
    if !(m >= 0.0) || !m.is_finite() {
        return invalid(format!("mass must be nonnegative, got {m}"));
    }
    match geom {
        CoverGeometry::Circle { length } if !(*length > 0.0) => return invalid("L must be positive"),
        CoverGeometry::TorusStrip { l1, l2 } if !(*l1 > 0.0 && *l2 > 0.0) => {
            return invalid("L1, L2 must be positive")
        }
        CoverGeometry::TorusStrip { .. } if m != 0.0 => {
            return invalid("torus-strip covers are massless only")
        }
        _ => {}
    }
    let pairs = n_list
        .par_iter()
        .map(|&n| one_cover(geom, m, n))
        .collect::<Result<Vec<_>>>()?;
    let vol1 = geom.sheet_volume();
    let vols: Vec<f64> = n_list.iter().map(|&n| n as f64 * vol1).collect();
    let block_log_det: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let direct_log_det: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let values: Vec<f64> = block_log_det.iter().zip(&vols).map(|(l, v)| l / v).collect();
    let max_route_gap = pairs
        .iter()
        .zip(&vols)
        .map(|((a, b), v)| (a - b).abs() / v)
        .fold(0.0, f64::max);
    let samples: Vec<(f64, f64)> = n_list
        .iter()
        .zip(&values)
        .map(|(&n, &v)| (1.0 / n as f64, v))
        .collect();
    let limit_estimate = if m > 0.0 {
        gapped_limit(&values)
    } else if samples.len() >= 3 {
        extrapolate(&samples, &[Basis::PowerLog(1.0), Basis::Power(1.0), Basis::Power(2.0)])?
    } else {
        // two samples: report the last value, flagged as not converged
        let last = values[values.len() - 1];
        ExtrapolationResult {
            value: last,
            error_estimate: (last - values[0]).abs(),
            orders_used: vec![],
            converged: false,
            stages: vec![last],
        }
    };
    Ok(CoverFreeEnergySeq {
        n_list: n_list.to_vec(),
        values,
        block_log_det,
        direct_log_det,
        max_route_gap,
        limit_estimate,
    })
}
