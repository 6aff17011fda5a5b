use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use fieldlab_numerics::{herm_eig, richardson, sym_eig};
use fieldlab_spectra::{cycle_cover_build, reduce_angle, twisted_laplacian, CoverGraph};

use crate::{invalid, CoversError, Result};

/// A θ-family of twisted operators together with the covers it decomposes.
pub trait TwistedFamily: Sync {
    /// The two lowest eigenvalues of the twisted operator at θ.
    fn bottom_pair(&self, theta: f64) -> Result<(f64, f64)>;
    /// Positive eigenvalues below `eps` of the degree-N cover, computed on
    /// the cover itself.
    fn cover_small_eigenvalues(&self, n: usize, eps: f64) -> Result<Vec<f64>>;
}

/// Massless twisted circle of length L: λ₀(θ) = (θ/L)² on (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleFamily {
    pub length: f64,
}

impl TwistedFamily for CircleFamily {
    fn bottom_pair(&self, theta: f64) -> Result<(f64, f64)> {
        let a = reduce_angle(theta.abs()).abs();
        Ok(((a / self.length).powi(2), ((2.0 * PI - a) / self.length).powi(2)))
    }

    fn cover_small_eigenvalues(&self, n: usize, eps: f64) -> Result<Vec<f64>> {
        let big = n as f64 * self.length;
        let mut out = Vec::new();
        for k in 1.. {
            let v = (2.0 * PI * k as f64 / big).powi(2);
            if v >= eps {
                break;
            }
            out.push(v);
            out.push(v);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFamily {
    pub graph: CoverGraph,
}

impl TwistedFamily for GraphFamily {
    fn bottom_pair(&self, theta: f64) -> Result<(f64, f64)> {
        if self.graph.n_vertices < 2 {
            return invalid("graph family needs at least two vertices");
        }
        let v = herm_eig(&twisted_laplacian(&self.graph, theta))?.values;
        Ok((v[0].max(0.0), v[1]))
    }

    fn cover_small_eigenvalues(&self, n: usize, eps: f64) -> Result<Vec<f64>> {
        let g = CoverGraph {
            degree: n,
            ..self.graph.clone()
        };
        let l = cycle_cover_build(&g)?.laplacian;
        Ok(sym_eig(&l)?
            .values
            .into_iter()
            .filter(|&v| v > 1e-12 && v < eps)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lambda0Curve {
    pub theta_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub lambda1: Vec<f64>,
    pub p: u32,
    pub a: f64,
    pub b: f64,
    pub r_squared: f64,
    /// Half-width η of the fit window |θ| ≤ η.
    pub window: f64,
    /// ½·min_θ λ₁(θ).
    pub eps0: f64,
    /// Set when the log–log fit has R² below 0.999.
    pub flagged: bool,
}

const WINDOW: f64 = 0.3;
const MIN_R2: f64 = 0.999;

/// λ₀ on a symmetric grid, with p from a log–log fit on |θ| ≤ 0.3, a from
/// Richardson extrapolation of λ₀/θ^{2p} to θ = 0 and b its minimum on the
/// window.
pub fn lambda0_analysis<F: TwistedFamily + ?Sized>(
    family: &F,
    theta_grid: &[f64],
) -> Result<Lambda0Curve> {
    if theta_grid.len() < 3 {
        return invalid("theta grid needs at least three points");
    }
    if theta_grid.iter().any(|t| !(t.abs() <= PI + 1e-12)) {
        return invalid("theta grid must lie in [-pi, pi]");
    }
    let tol = 1e-12;
    if !theta_grid
        .iter()
        .all(|&t| theta_grid.iter().any(|&s| (s + t).abs() <= tol))
    {
        return invalid("theta grid must be symmetric about 0");
    }
    let pairs = theta_grid
        .par_iter()
        .map(|&t| family.bottom_pair(t))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let lambda1: Vec<f64> = pairs.iter().map(|p| p.1).collect();

    // one point per |θ| in the window
    let mut win: Vec<(f64, f64)> = theta_grid
        .iter()
        .zip(&values)
        .filter(|(t, _)| t.abs() > tol && t.abs() <= WINDOW + tol && **t > 0.0)
        .map(|(&t, &v)| (t, v))
        .collect();
    win.sort_by(|a, b| b.0.total_cmp(&a.0));
    if win.len() < 3 {
        return Err(CoversError::FitFailed("fewer than three positive grid points in the window".into()));
    }
    if win.iter().any(|&(_, v)| !(v > 0.0)) {
        return Err(CoversError::FitFailed("lambda0 vanishes off theta = 0".into()));
    }
    let xs: Vec<f64> = win.iter().map(|w| w.0.ln()).collect();
    let ys: Vec<f64> = win.iter().map(|w| w.1.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 0.0 };
    let p = (slope / 2.0).round();
    if !(p >= 1.0) || !slope.is_finite() {
        return Err(CoversError::FitFailed(format!("log-log slope {slope}")));
    }
    let p = p as u32;
    let ratios: Vec<(f64, f64)> = win
        .iter()
        .map(|&(t, v)| (t * t, v / t.powi(2 * p as i32)))
        .collect();
    let tail = &ratios[ratios.len().saturating_sub(4)..];
    let a = if tail.len() >= 3 {
        richardson(tail, 1)?.value
    } else {
        tail[tail.len() - 1].1
    };
    let b = ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min).min(a);
    let eps0 = 0.5 * lambda1.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Lambda0Curve {
        theta_grid: theta_grid.to_vec(),
        values,
        lambda1,
        p,
        a,
        b,
        r_squared,
        window: WINDOW,
        eps0,
        flagged: r_squared < MIN_R2,
    })
}
