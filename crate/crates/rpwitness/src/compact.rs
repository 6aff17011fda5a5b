use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use fieldlab_numerics::gauss_legendre;

use crate::certificate::{WitnessCertificate, WitnessParams};
use crate::{Result, RpError, NEGATIVE_TOL};

/// Laplace eigenfunction on the circle of length L, L²-normalized; odd
/// under θ ↦ −θ for the sine modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleMode {
    pub k: usize,
    pub odd: bool,
    pub lambda: f64,
}

impl CircleMode {
    pub fn eval(&self, length: f64, theta: f64) -> f64 {
        if self.k == 0 {
            return 1.0 / length.sqrt();
        }
        let a = 2.0 * PI * self.k as f64 * theta / length;
        let c = (2.0 / length).sqrt();
        if self.odd {
            c * a.sin()
        } else {
            c * a.cos()
        }
    }
}

/// All modes with eigenvalue ≤ Λ.
pub fn circle_modes(length: f64, lambda: f64) -> Vec<CircleMode> {
    let mut out = vec![CircleMode { k: 0, odd: false, lambda: 0.0 }];
    let mut k = 1;
    loop {
        let l = (2.0 * PI * k as f64 / length).powi(2);
        if l > lambda * (1.0 + 1e-14) {
            break;
        }
        out.push(CircleMode { k, odd: false, lambda: l });
        out.push(CircleMode { k, odd: true, lambda: l });
        k += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactParams {
    pub length: f64,
    pub lambda: f64,
    /// Number of cubic B-splines; None picks 2m + 8 for m constraints.
    pub basis_size: Option<usize>,
    /// Splines live on [margin, 1 − margin]·L/2.
    pub margin: f64,
}

impl CompactParams {
    pub fn circle(lambda: f64) -> Self {
        CompactParams {
            length: 2.0 * PI,
            lambda,
            basis_size: None,
            margin: 0.02,
        }
    }
}

fn cardinal_cubic(u: f64) -> f64 {
    match u {
        u if !(0.0..4.0).contains(&u) => 0.0,
        u if u < 1.0 => u * u * u / 6.0,
        u if u < 2.0 => (-3.0 * u * u * u + 12.0 * u * u - 12.0 * u + 4.0) / 6.0,
        u if u < 3.0 => (3.0 * u * u * u - 24.0 * u * u + 60.0 * u - 44.0) / 6.0,
        u => (4.0 - u).powi(3) / 6.0,
    }
}

/// Uniform cubic B-splines on [a, b]: knot spacing and left ends.
pub(crate) struct SplineBasis {
    pub a: f64,
    pub step: f64,
    pub size: usize,
}

impl SplineBasis {
    pub fn new(length: f64, margin: f64, size: usize) -> Self {
        let a = margin * length / 2.0;
        let b = (1.0 - margin) * length / 2.0;
        SplineBasis { a, step: (b - a) / (size + 3) as f64, size }
    }

    pub fn eval(&self, j: usize, x: f64) -> f64 {
        cardinal_cubic((x - self.a) / self.step - j as f64)
    }

    /// ∫ B_j(x) g(x) dx, exact for polynomials of degree ≤ 2·10 − 4 per piece.
    pub fn integrate<F: Fn(f64) -> f64>(&self, j: usize, g: F) -> f64 {
        let rule = gauss_legendre(10, 0.0, 1.0).expect("fixed rule");
        let mut total = 0.0;
        for piece in 0..4 {
            let left = self.a + (j + piece) as f64 * self.step;
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                let x = left + t * self.step;
                total += self.step * w * self.eval(j, x) * g(x);
            }
        }
        total
    }
}

/// m × M matrix of ⟨B_j, e_i⟩.
fn moments(p: &CompactParams, modes: &[CircleMode], basis: &SplineBasis) -> DMatrix<f64> {
    DMatrix::from_fn(modes.len(), basis.size, |i, j| {
        basis.integrate(j, |x| modes[i].eval(p.length, x))
    })
}

fn validate(p: &CompactParams) -> Result<(Vec<CircleMode>, usize)> {
    if !(p.length > 0.0 && p.lambda >= 0.0) {
        return Err(RpError::InvalidArgument("need L > 0 and Λ ≥ 0".into()));
    }
    if !(p.margin > 0.0 && p.margin < 0.5) {
        return Err(RpError::InvalidArgument("margin must lie in (0, 1/2)".into()));
    }
    let modes = circle_modes(p.length, p.lambda);
    // λ* is the largest odd eigenvalue ≤ Λ: the last sine mode
    let star = modes
        .iter()
        .rposition(|m| m.odd)
        .ok_or_else(|| RpError::Precondition(format!("no odd eigenvalue ≤ Λ = {}", p.lambda)))?;
    Ok((modes, star))
}

/// Σ_{λ ≤ Λ} ±⟨f, e_λ⟩²/(λ + 1), the sign being the parity of e_λ.
pub(crate) fn compact_pairing(p: &CompactParams, coefficients: &[f64]) -> Result<f64> {
    let (modes, _) = validate(p)?;
    let basis = SplineBasis::new(p.length, p.margin, coefficients.len());
    let g = moments(p, &modes, &basis);
    let proj = &g * DVector::from_column_slice(coefficients);
    Ok(modes
        .iter()
        .zip(proj.iter())
        .map(|(m, &c)| if m.odd { -c * c } else { c * c } / (m.lambda + 1.0))
        .sum())
}

/// ⟨Θf, (Δ + 1)⁻¹f⟩ with no cutoff, through the circle Green function
/// cosh(d − L/2)/(2 sinh(L/2)): it separates into (C² + S²)/(2 sinh(L/2)).
pub(crate) fn compact_uncut(p: &CompactParams, coefficients: &[f64]) -> f64 {
    let basis = SplineBasis::new(p.length, p.margin, coefficients.len());
    let q = p.length / 4.0;
    let (mut c, mut s) = (0.0, 0.0);
    for (j, &cj) in coefficients.iter().enumerate() {
        c += cj * basis.integrate(j, |u| (u - q).cosh());
        s += cj * basis.integrate(j, |u| (u - q).sinh());
    }
    (c * c + s * s) / (2.0 * (p.length / 2.0).sinh())
}

/// f supported in the open half (0, L/2) with ⟨f, e_λ⟩ = δ_{λ, λ*} on the
/// odd mode at λ*, by minimum-norm least squares on cubic B-splines.
pub fn compact_witness(p: &CompactParams) -> Result<WitnessCertificate> {
    let (modes, star) = validate(p)?;
    let size = p.basis_size.unwrap_or(2 * modes.len() + 8);
    if size < modes.len() {
        return Err(RpError::InvalidArgument(format!(
            "basis of {size} splines cannot meet {} constraints",
            modes.len()
        )));
    }
    let basis = SplineBasis::new(p.length, p.margin, size);
    let g = moments(p, &modes, &basis);
    let svd = g.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(RpError::RankDeficient(smin / smax));
    }
    let mut rhs = DVector::zeros(modes.len());
    rhs[star] = 1.0;
    let c = svd
        .solve(&rhs, 0.0)
        .map_err(|e| RpError::InvalidArgument(e.to_string()))?;
    let coefficients: Vec<f64> = c.iter().copied().collect();
    let residual = (&g * &c - &rhs).amax();
    let params = CompactParams { basis_size: Some(size), ..p.clone() };
    let value = compact_pairing(&params, &coefficients)?;
    let lambda_star = modes[star].lambda;
    let tolerance = NEGATIVE_TOL + 10.0 * residual;
    Ok(WitnessCertificate {
        uncut_pairing: compact_uncut(&params, &coefficients),
        params: WitnessParams::CompactDual { params, lambda_star, coefficients },
        pairing_value: value,
        error_estimate: residual,
        tolerance,
        negative: value < -tolerance,
        target: Some(-1.0 / (lambda_star + 1.0)),
        trend: Vec::new(),
        diagnostics: Vec::new(),
    })
}
