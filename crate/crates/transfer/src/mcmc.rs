//! Metropolis sampling of the periodic chain e^{−S_N(σ)} and a thermodynamic
//! integration estimate of its free-energy density.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use fieldlab_numerics::gauss_legendre;

use crate::poly::EvenPoly;
use crate::{Result, TransferError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcOptions {
    /// Uniform proposal half-width.
    pub width: f64,
    /// Keep every `thin`-th sweep.
    pub thin: usize,
    pub burn_in_fraction: f64,
}

impl Default for McmcOptions {
    fn default() -> Self {
        McmcOptions {
            width: 1.0,
            thin: 10,
            burn_in_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McmcResult {
    /// Thinned post-burn-in configurations.
    pub samples: Vec<Vec<f64>>,
    pub acceptance_rate: f64,
    pub sweeps: usize,
    pub seed: u64,
}

/// One step is one sweep of single-site updates over all N sites.
struct Chain {
    p: EvenPoly,
    sigma: Vec<f64>,
    rng: ChaCha8Rng,
    width: f64,
    accepted: u64,
    proposed: u64,
}

impl Chain {
    fn new(p: EvenPoly, n: usize, rng: ChaCha8Rng, width: f64) -> Self {
        Chain {
            p,
            sigma: vec![0.0; n],
            rng,
            width,
            accepted: 0,
            proposed: 0,
        }
    }

    fn sweep(&mut self) {
        let n = self.sigma.len();
        for i in 0..n {
            let l = self.sigma[(i + n - 1) % n];
            let r = self.sigma[(i + 1) % n];
            let old = self.sigma[i];
            let new = old + self.width * (2.0 * self.rng.random::<f64>() - 1.0);
            let local = |x: f64| (x - l).powi(2) + (r - x).powi(2) + self.p.eval(x);
            let ds = local(new) - local(old);
            self.proposed += 1;
            if ds <= 0.0 || self.rng.random::<f64>() < (-ds).exp() {
                self.sigma[i] = new;
                self.accepted += 1;
            }
        }
    }
}

pub fn mcmc_chain(
    p: &EvenPoly,
    n: usize,
    steps: usize,
    seed: u64,
    opts: McmcOptions,
) -> Result<McmcResult> {
    if steps == 0 || n == 0 {
        return Err(TransferError::InvalidArgument("steps and N must be positive".into()));
    }
    if !p.confining() {
        return Err(TransferError::Divergent);
    }
    let mut ch = Chain::new(p.clone(), n, ChaCha8Rng::seed_from_u64(seed), opts.width);
    let burn = (opts.burn_in_fraction * steps as f64) as usize;
    let mut samples = Vec::new();
    for s in 0..steps {
        ch.sweep();
        if s >= burn && (s - burn) % opts.thin.max(1) == 0 {
            samples.push(ch.sigma.clone());
        }
    }
    Ok(McmcResult {
        samples,
        acceptance_rate: ch.accepted as f64 / ch.proposed as f64,
        sweeps: steps,
        seed,
    })
}

/// Mean and batch-means standard error.
pub fn batch_means(xs: &[f64], batches: usize) -> (f64, f64) {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let b = batches.min(n).max(2);
    let len = n / b;
    let bm: Vec<f64> = (0..b)
        .map(|k| xs[k * len..(k + 1) * len].iter().sum::<f64>() / len as f64)
        .collect();
    let mb = bm.iter().sum::<f64>() / b as f64;
    let var = bm.iter().map(|x| (x - mb).powi(2)).sum::<f64>() / (b - 1) as f64;
    (mean, (var / b as f64).sqrt())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McmcFreeEnergy {
    pub density: f64,
    pub standard_error: f64,
    pub reference_density: f64,
    pub nodes: Vec<f64>,
    pub means: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub acceptance_rates: Vec<f64>,
}

/// (1/N) log Z for P via interpolation from the Gaussian reference
/// P₀ = σ²: d/dβ log Z_β = −E_β[Σ(P − P₀)(σ_i)], integrated with
/// `nodes` Gauss–Legendre points in β, one independent chain per node.
pub fn mcmc_free_energy(
    p: &EvenPoly,
    n: usize,
    steps_per_node: usize,
    nodes: usize,
    seed: u64,
    opts: McmcOptions,
) -> Result<McmcFreeEnergy> {
    if steps_per_node == 0 || n < 2 {
        return Err(TransferError::InvalidArgument("need steps > 0 and N >= 2".into()));
    }
    if !p.confining() {
        return Err(TransferError::Divergent);
    }
    let p0 = EvenPoly::mass(1.0);
    let delta = p.scaled_sum(1.0, &p0, -1.0);
    let rule = gauss_legendre(nodes, 0.0, 1.0)?;
    let mut means = Vec::new();
    let mut ses = Vec::new();
    let mut acc = Vec::new();
    for (j, &beta) in rule.nodes.iter().enumerate() {
        let pb = p0.scaled_sum(1.0 - beta, p, beta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64 + 1);
        let mut ch = Chain::new(pb, n, rng, opts.width);
        let burn = (opts.burn_in_fraction * steps_per_node as f64) as usize;
        let mut obs = Vec::with_capacity(steps_per_node - burn);
        for s in 0..steps_per_node {
            ch.sweep();
            if s >= burn {
                obs.push(ch.sigma.iter().map(|&x| delta.eval(x)).sum::<f64>());
            }
        }
        let (m, se) = batch_means(&obs, 50);
        means.push(m);
        ses.push(se);
        acc.push(ch.accepted as f64 / ch.proposed as f64);
    }
    let integral: f64 = rule.weights.iter().zip(&means).map(|(w, m)| w * m).sum();
    let se_int = rule
        .weights
        .iter()
        .zip(&ses)
        .map(|(w, s)| (w * s).powi(2))
        .sum::<f64>()
        .sqrt();
    // exact Gaussian reference: Z₀ = π^{N/2} ∏ (2 − 2cos(2πk/N) + 1)^{−1/2}
    let nf = n as f64;
    let log_z0 = 0.5 * nf * PI.ln()
        - 0.5
            * (0..n)
                .map(|k| (3.0 - 2.0 * (2.0 * PI * k as f64 / nf).cos()).ln())
                .sum::<f64>();
    let reference_density = log_z0 / nf;
    Ok(McmcFreeEnergy {
        density: (log_z0 - integral) / nf,
        standard_error: se_int / nf,
        reference_density,
        nodes: rule.nodes.clone(),
        means,
        standard_errors: ses,
        acceptance_rates: acc,
    })
}
