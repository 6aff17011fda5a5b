use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use fieldlab_numerics::{gauss_legendre, QuadratureRule};

use crate::bump::Bump;
use crate::certificate::{WitnessCertificate, WitnessParams};
use crate::{Result, RpError, NEGATIVE_TOL};

/// f(x) = g(x₁)ψ(x₂)ψ(x₃) with g = Σ_k c_k β^{(k)}(x₁ − x₀)/∫β, k = 1..K,
/// β an even bump of half-width w (support inside x₁ > 0), and ψ a
/// Gaussian of width s (Fψ(η) = e^{−s²η²/2}).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallParams {
    pub lambda: f64,
    pub basis_size: usize,
    pub shift: f64,
    pub bump_halfwidth: f64,
    pub gauss_width: f64,
}

impl BallParams {
    /// x₀ = 0.5, w = 0.1, s = 0.1/√Λ.
    pub fn new(lambda: f64, basis_size: usize) -> Self {
        BallParams {
            lambda,
            basis_size,
            shift: 0.5,
            bump_halfwidth: 0.1,
            gauss_width: 0.1 / lambda.sqrt(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || self.basis_size == 0 {
            return Err(RpError::InvalidArgument("need Λ > 0 and a nonempty basis".into()));
        }
        if !(self.bump_halfwidth > 0.0 && self.shift > self.bump_halfwidth) {
            return Err(RpError::Precondition("bump support must lie in x₁ > 0".into()));
        }
        if !(self.gauss_width > 0.0) {
            return Err(RpError::InvalidArgument("Gaussian width must be positive".into()));
        }
        Ok(())
    }

    fn bump(&self) -> Bump {
        Bump { center: 0.0, halfwidth: self.bump_halfwidth }
    }
}

/// −∫_{|ξ|² ≤ Λ} ξ₁²/(1 + |ξ|²) dξ = −(4π/3)(R³/3 − R + atan R), R = √Λ.
pub fn ball_target(lambda: f64) -> f64 {
    let r = lambda.sqrt();
    -4.0 * PI / 3.0 * (r * r * r / 3.0 - r + r.atan())
}

/// Transverse weight D(ξ₁) = 2π∫₀^ρ e^{−s²r²} r dr/(1 + ξ₁² + r²), ρ² = Λ − ξ₁².
fn slice_weight(p: &BallParams, xi: f64, radial: &QuadratureRule) -> f64 {
    let rho = (p.lambda - xi * xi).max(0.0).sqrt();
    let s2 = p.gauss_width * p.gauss_width;
    2.0 * PI
        * rho
        * radial
            .nodes
            .iter()
            .zip(&radial.weights)
            .map(|(&t, &w)| {
                let r = rho * t;
                w * (-s2 * r * r).exp() * r / (1.0 + xi * xi + r * r)
            })
            .sum::<f64>()
}

const FINE: usize = 160;

struct Grid {
    xi: Vec<f64>,
    weight: Vec<f64>,
    /// Fg_k(ξ) for each basis element, as (re, im).
    columns: Vec<Vec<(f64, f64)>>,
}

fn grid(p: &BallParams, nodes: usize) -> Result<Grid> {
    let r = p.lambda.sqrt();
    let rule = gauss_legendre(nodes, -r, r)?;
    let radial = gauss_legendre(40, 0.0, 1.0)?;
    let beta = p.bump();
    let mass = beta.mass();
    let mut columns = vec![Vec::with_capacity(rule.len()); p.basis_size];
    let mut weight = Vec::with_capacity(rule.len());
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        weight.push(w * slice_weight(p, x, &radial));
        let fb = beta.fourier(x).0 / mass;
        let (sn, cs) = (x * p.shift).sin_cos();
        // F[β^{(k)}(· − x₀)](ξ) = e^{iξx₀}(−iξ)^k Fβ(ξ)
        let mut pow = (1.0, 0.0);
        for col in columns.iter_mut() {
            pow = (pow.1 * x, -pow.0 * x);
            let z = (pow.0 * cs - pow.1 * sn, pow.0 * sn + pow.1 * cs);
            col.push((z.0 * fb, z.1 * fb));
        }
    }
    Ok(Grid { xi: rule.nodes, weight, columns })
}

fn pairing_from(grid: &Grid, c: &[f64]) -> f64 {
    (0..grid.xi.len())
        .map(|q| {
            let (mut re, mut im) = (0.0, 0.0);
            for (k, &ck) in c.iter().enumerate() {
                re += ck * grid.columns[k][q].0;
                im += ck * grid.columns[k][q].1;
            }
            grid.weight[q] * (re * re - im * im)
        })
        .sum()
}

/// ∫_{|ξ|²≤Λ} ⟨ξ⟩⁻² Re(Fg(ξ₁)²)Fψ(ξ₂)²Fψ(ξ₃)² dξ for given coefficients.
pub(crate) fn ball_pairing(p: &BallParams, c: &[f64]) -> Result<f64> {
    p.validate()?;
    if c.len() != p.basis_size {
        return Err(RpError::InvalidArgument("coefficient count ≠ basis size".into()));
    }
    Ok(pairing_from(&grid(p, FINE)?, c))
}

/// The same integrand over all of ℝ³ (no cutoff), via the line identity
/// ∫Re(Fg²)/(ξ² + κ) = π(∫g e^{−√κx})²/√κ in each transverse mode.
pub(crate) fn ball_uncut(p: &BallParams, c: &[f64]) -> Result<f64> {
    p.validate()?;
    let beta = p.bump();
    let mass = beta.mass();
    let s = p.gauss_width;
    let rmax = 9.0 / s;
    let rule = gauss_legendre(200, 0.0, rmax)?;
    let total: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&r, &w)| {
            let m = (1.0 + r * r).sqrt();
            // ∫β^{(k)}(x − x₀)e^{−mx} = m^k ∫β(x − x₀)e^{−mx}
            let lap = (-m * p.shift).exp() * beta.laplace(m) / mass;
            let poly: f64 = c.iter().enumerate().map(|(k, &ck)| ck * m.powi(k as i32 + 1)).sum();
            let line = PI * (poly * lap).powi(2) / m;
            w * 2.0 * PI * r * (-s * s * r * r).exp() * line
        })
        .sum();
    Ok(total)
}

/// Least-squares fit of Fg to iξ₁ on the ball, weighted by the transverse
/// slice weight, for basis sizes 1..=K.
pub fn fourier_ball_witness(p: &BallParams) -> Result<WitnessCertificate> {
    p.validate()?;
    let full = grid(p, FINE)?;
    let nq = full.xi.len();
    let mut trend = Vec::with_capacity(p.basis_size);
    let mut best = Vec::new();
    for size in 1..=p.basis_size {
        let mut a = DMatrix::zeros(2 * nq, size);
        let mut b = DVector::zeros(2 * nq);
        for q in 0..nq {
            let sw = full.weight[q].max(0.0).sqrt();
            for k in 0..size {
                a[(2 * q, k)] = sw * full.columns[k][q].0;
                a[(2 * q + 1, k)] = sw * full.columns[k][q].1;
            }
            b[2 * q + 1] = sw * full.xi[q];
        }
        let svd = a.svd(true, true);
        let smax = svd.singular_values.max();
        let c = svd
            .solve(&b, 1e-13 * smax)
            .map_err(|e| RpError::InvalidArgument(e.to_string()))?;
        let c: Vec<f64> = c.iter().copied().collect();
        trend.push((size, pairing_from(&full, &c)));
        best = c;
    }
    let value = trend.last().map(|t| t.1).unwrap_or(0.0);
    let coarse = {
        // same coefficients on a coarser grid bound the quadrature error
        pairing_from(&grid(p, FINE / 2)?, &best)
    };
    let err = (value - coarse).abs() + 1e-14 * value.abs();
    let tolerance = NEGATIVE_TOL + 10.0 * err;
    let slack = 1e-9 * value.abs() + tolerance;
    let diagnostics = trend
        .windows(2)
        .filter(|w| w[1].1 > w[0].1 + slack)
        .map(|w| format!("non-monotone: size {} gives {} after {}", w[1].0, w[1].1, w[0].1))
        .collect();
    Ok(WitnessCertificate {
        uncut_pairing: ball_uncut(p, &best)?,
        params: WitnessParams::FourierBall { params: p.clone(), coefficients: best },
        pairing_value: value,
        error_estimate: err,
        tolerance,
        negative: value < -tolerance,
        target: Some(ball_target(p.lambda)),
        trend,
        diagnostics,
    })
}
