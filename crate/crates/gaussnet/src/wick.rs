use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use fieldlab_numerics::hermite_coeffs;

use crate::green::covariance;
use crate::network::GaussianNetwork;
use crate::{invalid, GaussError, Result};

/// X_var^power, Wick-ordered (:X^n:) when `ordered`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WickFactor {
    pub var: usize,
    pub power: u32,
    pub ordered: bool,
}

/// Σ coeff·∏ C_{ij}^{e_ij} with integer coefficients counting pairings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingPolynomial {
    pub terms: Vec<(u64, Vec<((usize, usize), u32)>)>,
}

impl PairingPolynomial {
    pub fn eval(&self, cov: &DMatrix<f64>) -> f64 {
        self.terms
            .iter()
            .map(|(c, mono)| {
                *c as f64
                    * mono
                        .iter()
                        .map(|&((i, j), e)| cov[(i, j)].powi(e as i32))
                        .product::<f64>()
            })
            .sum()
    }

    /// Number of admissible pairings.
    pub fn count(&self) -> u64 {
        self.terms.iter().map(|t| t.0).sum()
    }
}

const MAX_DEGREE: u32 = 12;

fn enumerate(
    legs: &[(usize, usize)],
    ordered: &[bool],
    used: &mut Vec<bool>,
    acc: &mut Vec<(usize, usize)>,
    out: &mut BTreeMap<Vec<((usize, usize), u32)>, u64>,
) {
    let Some(first) = used.iter().position(|u| !u) else {
        let mut mono: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for &e in acc.iter() {
            *mono.entry(e).or_insert(0) += 1;
        }
        *out.entry(mono.into_iter().collect()).or_insert(0) += 1;
        return;
    };
    used[first] = true;
    let (fa, va) = legs[first];
    for k in first + 1..legs.len() {
        if used[k] {
            continue;
        }
        let (fb, vb) = legs[k];
        if fa == fb && ordered[fa] {
            continue;
        }
        used[k] = true;
        acc.push((va.min(vb), va.max(vb)));
        enumerate(legs, ordered, used, acc, out);
        acc.pop();
        used[k] = false;
    }
    used[first] = false;
}

/// E[∏ factors] as a polynomial in the covariance entries: a sum over
/// pairings of all legs, with no pairing inside a Wick-ordered factor.
pub fn pairing_polynomial(factors: &[WickFactor]) -> Result<PairingPolynomial> {
    let degree: u32 = factors.iter().map(|f| f.power).sum();
    if degree > MAX_DEGREE {
        return Err(GaussError::DegreeTooLarge(degree));
    }
    if degree % 2 == 1 {
        return Ok(PairingPolynomial { terms: vec![] });
    }
    let mut legs = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        for _ in 0..f.power {
            legs.push((i, f.var));
        }
    }
    let ordered: Vec<bool> = factors.iter().map(|f| f.ordered).collect();
    let mut out = BTreeMap::new();
    enumerate(&legs, &ordered, &mut vec![false; legs.len()], &mut Vec::new(), &mut out);
    Ok(PairingPolynomial {
        terms: out.into_iter().map(|(m, c)| (c, m)).collect(),
    })
}

pub fn wick_product_expectation(cov: &DMatrix<f64>, factors: &[WickFactor]) -> Result<f64> {
    if factors.iter().any(|f| f.var >= cov.nrows()) {
        return invalid("factor variable out of range");
    }
    Ok(pairing_polynomial(factors)?.eval(cov))
}

/// Monomial coefficients (lowest first) of :X^n: = v^{n/2}·He_n(X/√v).
pub fn wick_power_coeffs(n: u32, variance: f64) -> Result<Vec<f64>> {
    let he = hermite_coeffs(n as usize)
        .ok_or_else(|| GaussError::InvalidArgument(format!("He_{n} coefficients overflow")))?;
    Ok(he
        .iter()
        .enumerate()
        .map(|(k, &c)| c as f64 * variance.powi(((n as usize - k) / 2) as i32))
        .collect())
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// Seeded draws with covariance Q⁻¹: φ = L⁻ᵀz for Q = LLᵀ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WickSample {
    pub samples: DMatrix<f64>,
    pub seed: u64,
}

fn draw_with_precision(q: &DMatrix<f64>, n_samples: usize, seed: u64) -> Result<DMatrix<f64>> {
    let n = q.nrows();
    let ch = q
        .clone()
        .cholesky()
        .ok_or_else(|| GaussError::NotPositiveDefinite("precision".into()))?;
    let lt = ch.l().transpose();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = DMatrix::zeros(n_samples, n);
    let mut z = DVector::zeros(n);
    for s in 0..n_samples {
        for v in z.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        let x = lt
            .solve_upper_triangular(&z)
            .ok_or_else(|| GaussError::NotPositiveDefinite("factor".into()))?;
        out.row_mut(s).copy_from(&x.transpose());
    }
    Ok(out)
}

pub fn sample_field(net: &GaussianNetwork, n_samples: usize, seed: u64) -> Result<WickSample> {
    if n_samples == 0 {
        return invalid("n_samples must be positive");
    }
    Ok(WickSample {
        samples: draw_with_precision(&net.q, n_samples, seed)?,
        seed,
    })
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (v / n).sqrt())
}

/// Sample mean and standard error of ∏ factors under N(0, cov).
pub fn wick_monte_carlo(
    cov: &DMatrix<f64>,
    factors: &[WickFactor],
    n_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n_samples < 2 {
        return invalid("need at least two samples");
    }
    if factors.iter().any(|f| f.var >= cov.nrows()) {
        return invalid("factor variable out of range");
    }
    let q = cov
        .clone()
        .cholesky()
        .ok_or_else(|| GaussError::NotPositiveDefinite("covariance".into()))?
        .inverse();
    let q = (&q + q.transpose()) * 0.5;
    let xs = draw_with_precision(&q, n_samples, seed)?;
    let polys: Vec<Vec<f64>> = factors
        .iter()
        .map(|f| {
            if f.ordered {
                wick_power_coeffs(f.power, cov[(f.var, f.var)])
            } else {
                let mut c = vec![0.0; f.power as usize + 1];
                c[f.power as usize] = 1.0;
                Ok(c)
            }
        })
        .collect::<Result<_>>()?;
    let vals: Vec<f64> = (0..n_samples)
        .map(|s| {
            factors
                .iter()
                .zip(&polys)
                .map(|(f, c)| horner(c, xs[(s, f.var)]))
                .product()
        })
        .collect();
    Ok(mean_se(&vals))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionStats {
    pub mean_s: f64,
    pub se_s: f64,
    pub mean_exp: f64,
    pub se_exp: f64,
    /// Smallest sampled S; a proxy for the lower bound of the Wick-ordered P.
    pub min_s: f64,
    /// Largest single weight e^{−S} over the sum of all weights.
    pub max_weight_share: f64,
    pub divergent: bool,
    pub n_samples: usize,
    pub seed: u64,
}

/// S = Σ_x Σ_k a_k :φ_x^k: with per-vertex Wick variance (Q⁻¹)_xx.
pub fn wick_interaction(
    net: &GaussianNetwork,
    coeffs: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<InteractionStats> {
    if n_samples < 2 {
        return invalid("need at least two samples");
    }
    let c = covariance(net)?;
    let n = net.len();
    // per-vertex monomial coefficients of Σ_k a_k :x^k:
    let mut per_vertex = Vec::with_capacity(n);
    for x in 0..n {
        let mut p = vec![0.0; coeffs.len().max(1)];
        for (k, &a) in coeffs.iter().enumerate() {
            if a != 0.0 {
                for (j, w) in wick_power_coeffs(k as u32, c[(x, x)])?.iter().enumerate() {
                    p[j] += a * w;
                }
            }
        }
        per_vertex.push(p);
    }
    let phi = draw_with_precision(&net.q, n_samples, seed)?;
    let s: Vec<f64> = (0..n_samples)
        .map(|i| (0..n).map(|x| horner(&per_vertex[x], phi[(i, x)])).sum())
        .collect();
    let w: Vec<f64> = s.iter().map(|v| (-v).exp()).collect();
    let (mean_s, se_s) = mean_se(&s);
    let (mean_exp, se_exp) = mean_se(&w);
    let total: f64 = w.iter().sum();
    let max_weight_share = w.iter().fold(0.0f64, |a, &b| a.max(b)) / total;
    let divergent = !mean_exp.is_finite() || !se_exp.is_finite() || max_weight_share > 0.5;
    Ok(InteractionStats {
        mean_s,
        se_s,
        mean_exp,
        se_exp,
        min_s: s.iter().copied().fold(f64::INFINITY, f64::min),
        max_weight_share,
        divergent,
        n_samples,
        seed,
    })
}

/// E[e^{−a Σ_x :φ_x²:}] = det(1 + 2aC)^{−1/2}·e^{a·tr C}.
pub fn wick_quadratic_exact(net: &GaussianNetwork, a: f64) -> Result<f64> {
    let c = covariance(net)?;
    let n = net.len();
    let m = DMatrix::identity(n, n) + &c * (2.0 * a);
    let m = (&m + m.transpose()) * 0.5;
    let ev = fieldlab_numerics::sym_eig(&m)?.values;
    if ev[0] <= 0.0 {
        return Err(GaussError::NotPositiveDefinite("1 + 2aC".into()));
    }
    let log_det: f64 = ev.iter().map(|v| v.ln()).sum();
    Ok((-0.5 * log_det + a * c.trace()).exp())
}
