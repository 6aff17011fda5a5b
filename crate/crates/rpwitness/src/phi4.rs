use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{Result, RpError};

/// N sites on a circle of length 2π, reflection j ↦ −j mod N, and the
/// Gaussian covariance Σ_{λ_k ≤ Λ} e_k e_kᵀ/(λ_k + 1) built from the
/// lattice Laplacian λ_k = (4/a²)sin²(πk/N).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSlice {
    pub sites: usize,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Mode {
    k: usize,
    odd: bool,
    lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReweightReport {
    pub coupling: f64,
    pub samples: usize,
    /// −1/(λ* + 1), the exact Gaussian pairing of the witness.
    pub gaussian: f64,
    /// E_c[(Θf·φ)(f·φ)] by reweighting Gaussian draws with e^{−cS}.
    pub estimate: f64,
    pub std_error: f64,
    /// (estimate − gaussian)/std_error.
    pub z: f64,
    /// Kish effective sample size of the weights.
    pub effective_samples: f64,
}

impl LatticeSlice {
    pub fn new(sites: usize, lambda: f64) -> Result<Self> {
        if sites < 8 || sites % 2 == 1 {
            return Err(RpError::InvalidArgument("need an even number of sites ≥ 8".into()));
        }
        if !(lambda > 0.0) {
            return Err(RpError::InvalidArgument("Λ must be positive".into()));
        }
        Ok(LatticeSlice { sites, lambda })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.sites as f64
    }

    fn modes(&self) -> Vec<Mode> {
        let a = self.spacing();
        let mut out = vec![Mode { k: 0, odd: false, lambda: 0.0 }];
        for k in 1..self.sites / 2 {
            let l = 4.0 / (a * a) * (PI * k as f64 / self.sites as f64).sin().powi(2);
            if l > self.lambda {
                break;
            }
            out.push(Mode { k, odd: false, lambda: l });
            out.push(Mode { k, odd: true, lambda: l });
        }
        out
    }

    fn mode_vector(&self, m: &Mode) -> DVector<f64> {
        let n = self.sites as f64;
        DVector::from_fn(self.sites, |j, _| {
            if m.k == 0 {
                return 1.0 / n.sqrt();
            }
            let a = 2.0 * PI * (m.k * j) as f64 / n;
            (2.0 / n).sqrt() * if m.odd { a.sin() } else { a.cos() }
        })
    }

    /// f on sites 1..N/2 − 1 with ⟨f, e_k⟩ = δ on the top odd kept mode;
    /// returns (f, λ*).
    pub fn witness(&self) -> Result<(DVector<f64>, f64)> {
        let modes = self.modes();
        let star = modes
            .iter()
            .rposition(|m| m.odd)
            .ok_or_else(|| RpError::Precondition("no odd lattice mode below Λ".into()))?;
        let half = self.sites / 2 - 1;
        let vecs: Vec<DVector<f64>> = modes.iter().map(|m| self.mode_vector(m)).collect();
        let g = DMatrix::from_fn(modes.len(), half, |i, j| vecs[i][j + 1]);
        let svd = g.svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smin > 1e-12 * smax) {
            return Err(RpError::RankDeficient(smin / smax));
        }
        let mut rhs = DVector::zeros(modes.len());
        rhs[star] = 1.0;
        let c = svd.solve(&rhs, 0.0).map_err(|e| RpError::InvalidArgument(e.to_string()))?;
        let mut f = DVector::zeros(self.sites);
        for j in 0..half {
            f[j + 1] = c[j];
        }
        Ok((f, modes[star].lambda))
    }

    pub fn reflect(&self, f: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.sites, |j, _| f[(self.sites - j) % self.sites])
    }

    /// ⟨Θf, C_Λ f⟩ exactly.
    pub fn gaussian_pairing(&self, f: &DVector<f64>) -> f64 {
        let tf = self.reflect(f);
        self.modes()
            .iter()
            .map(|m| {
                let e = self.mode_vector(m);
                tf.dot(&e) * f.dot(&e) / (m.lambda + 1.0)
            })
            .sum()
    }
}

const CHUNK: usize = 4096;

/// Draws φ ~ N(0, C_Λ) with ChaCha8 (stream = chunk index), weights each
/// draw by e^{−cS}, S = a·Σφ⁴, and estimates the weighted witness pairing
/// with a delta-method standard error.
pub fn phi4_reweighting(
    slice: &LatticeSlice,
    coupling: f64,
    samples: usize,
    seed: u64,
) -> Result<ReweightReport> {
    if !(coupling >= 0.0) || samples < 2 {
        return Err(RpError::InvalidArgument("need c ≥ 0 and at least two samples".into()));
    }
    let (f, _) = slice.witness()?;
    let gaussian = slice.gaussian_pairing(&f);
    let tf = slice.reflect(&f);
    // project onto the kept modes once: (f·φ) = Σ z_k ⟨f, e_k⟩/√(λ_k + 1)
    let modes = slice.modes();
    let cols: Vec<DVector<f64>> = modes
        .iter()
        .map(|m| slice.mode_vector(m) / (m.lambda + 1.0).sqrt())
        .collect();
    let pf: Vec<f64> = cols.iter().map(|e| f.dot(e)).collect();
    let ptf: Vec<f64> = cols.iter().map(|e| tf.dot(e)).collect();
    let a = slice.spacing();
    let chunks = samples.div_ceil(CHUNK);
    let draws: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = CHUNK.min(samples - chunk * CHUNK);
            let mut phi = DVector::zeros(slice.sites);
            let mut z = vec![0.0; cols.len()];
            (0..count)
                .map(|_| {
                    phi.fill(0.0);
                    for (zk, e) in z.iter_mut().zip(&cols) {
                        *zk = StandardNormal.sample(&mut rng);
                        phi.axpy(*zk, e, 1.0);
                    }
                    let x: f64 = z.iter().zip(&ptf).map(|(a, b)| a * b).sum::<f64>()
                        * z.iter().zip(&pf).map(|(a, b)| a * b).sum::<f64>();
                    let s = a * phi.iter().map(|v| v.powi(4)).sum::<f64>();
                    (x, s)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    // shift S by its minimum so the weights stay ≤ 1
    let smin = draws.iter().map(|d| d.1).fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = draws.iter().map(|d| (-coupling * (d.1 - smin)).exp()).collect();
    let sw: f64 = w.iter().sum();
    let sw2: f64 = w.iter().map(|v| v * v).sum();
    let estimate = draws.iter().zip(&w).map(|(d, wi)| wi * d.0).sum::<f64>() / sw;
    let var = draws
        .iter()
        .zip(&w)
        .map(|(d, wi)| (wi * (d.0 - estimate)).powi(2))
        .sum::<f64>()
        / (sw * sw);
    let std_error = var.sqrt();
    Ok(ReweightReport {
        coupling,
        samples,
        gaussian,
        estimate,
        std_error,
        z: (estimate - gaussian) / std_error,
        effective_samples: sw * sw / sw2,
    })
}
