use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use fieldlab_numerics::{lerch_sum, Spectrum, TailLaw};
use fieldlab_spectra::{circle_ladder, reduce_angle, TwistedCircle};

use crate::closed::ladder_zeta;
use crate::laurent::laurent_at;
use crate::mellin::mellin_at_zero;
use crate::{lambda_min, Result, ZetaError, ZetaMethod};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetZeta {
    /// det_ζ (primed when kernel_dim > 0).
    pub value: f64,
    pub log_det: f64,
    pub zeta0: f64,
    pub error_estimate: f64,
    pub kernel_dim: usize,
    pub method: ZetaMethod,
}

/// −ζ'(0) for a one-factor law via the Cauchy-circle derivative of the
/// closed form; the error estimate compares two radii.
fn closed_log_det(sp: &Spectrum) -> Result<(f64, f64, f64)> {
    let TailLaw::Separable { factors, mass2 } = &sp.truncation.tail else {
        unreachable!()
    };
    let f = |s: Complex64| ladder_zeta(&factors[0], *mass2, s);
    let a = laurent_at(f, Complex64::new(0.0, 0.0), 0.2, 64)?;
    let b = laurent_at(f, Complex64::new(0.0, 0.0), 0.15, 64)?;
    Ok((
        -a.derivative.re,
        a.finite.re,
        (a.derivative - b.derivative).norm() + 1e-14 * a.derivative.norm(),
    ))
}

/// log det_ζ = −ζ'(0), zero modes excluded.
pub fn log_det_zeta(sp: &Spectrum) -> Result<DetZeta> {
    let (log_det, zeta0, err, method) = match &sp.truncation.tail {
        TailLaw::Finite => {
            let mut terms: Vec<f64> = sp.positive().map(f64::ln).collect();
            terms.reverse();
            let ld: f64 = terms.iter().sum();
            let n = terms.len() as f64;
            (ld, n, 1e-15 * terms.iter().map(|x| x.abs()).sum::<f64>(), ZetaMethod::DirectSum)
        }
        TailLaw::Separable { factors, .. } if factors.len() == 1 => {
            let (ld, z0, e) = closed_log_det(sp)?;
            (ld, z0, e, ZetaMethod::ClosedForm)
        }
        law @ TailLaw::Separable { .. } => {
            let lmin = lambda_min(sp).ok_or(ZetaError::MissingTailLaw)?;
            let p = mellin_at_zero(law, lmin)?;
            (-p.dzeta0(), p.zeta0(), p.error_estimate, ZetaMethod::MellinSplit)
        }
    };
    if !log_det.is_finite() || !err.is_finite() {
        return Err(ZetaError::Continuation("non-finite ζ'(0)".into()));
    }
    Ok(DetZeta {
        value: log_det.exp(),
        log_det,
        zeta0,
        error_estimate: err,
        kernel_dim: sp.kernel_dim.max(sp.truncation.tail.kernel_dim()),
        method,
    })
}

/// Like [`log_det_zeta`] but forcing the Mellin split for separable laws.
pub fn log_det_mellin(sp: &Spectrum) -> Result<DetZeta> {
    let lmin = lambda_min(sp).ok_or(ZetaError::MissingTailLaw)?;
    let p = mellin_at_zero(&sp.truncation.tail, lmin)?;
    let log_det = -p.dzeta0();
    Ok(DetZeta {
        value: log_det.exp(),
        log_det,
        zeta0: p.zeta0(),
        error_estimate: p.error_estimate,
        kernel_dim: sp.truncation.tail.kernel_dim(),
        method: ZetaMethod::MellinSplit,
    })
}

/// exp(−ζ'(0)); alias of [`log_det_zeta`] for callers that want the value.
pub fn det_zeta(sp: &Spectrum) -> Result<DetZeta> {
    log_det_zeta(sp)
}

/// ∏(1 + λ) over a summable eigenvalue list.
pub fn det_fredholm(eigs: &[f64]) -> Result<f64> {
    let tr: f64 = eigs.iter().map(|x| x.abs()).sum();
    if !tr.is_finite() {
        return Err(ZetaError::InvalidArgument("eigenvalues not summable".into()));
    }
    Ok(eigs.iter().map(|x| 1.0 + x).product())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DiagonalPerturbation {
    Zero,
    /// K_n = m²/λ_n on nonzero modes; the zero mode becomes m².
    MassShift { mass: f64 },
    /// K_n = λ_n(θ′)/λ_n(θ) − 1.
    TwistChange { theta_to: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub log_det_perturbed: f64,
    pub log_det_base: f64,
    pub log_fredholm: f64,
    pub block: usize,
    pub residual: f64,
}

/// Σ_{n>N} log(1 + c/n²) = Σ_j (−1)^{j+1} c^j/j · ζ_H(2j, N+1).
fn log1p_tail(c: f64, n: usize) -> Result<f64> {
    let a = n as f64 + 1.0;
    let mut total = 0.0;
    let mut cp = 1.0;
    for j in 1..200 {
        cp *= c;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let t = sign * cp / j as f64 * lerch_sum(Complex64::new(2.0 * j as f64, 0.0), a)?.re;
        total += t;
        if t.abs() < 1e-18 {
            break;
        }
    }
    Ok(total)
}

/// Checks det_ζ(A(1+K)) = det_ζ(A)·det_F(1+K) for A a twisted circle
/// (massless) and K diagonal; det_F is a finite block product plus an
/// exactly resummed tail.
pub fn factorization_check(
    a: &TwistedCircle,
    k: &DiagonalPerturbation,
    block: usize,
) -> Result<FactorizationReport> {
    if a.mass != 0.0 {
        return Err(ZetaError::InvalidArgument("base operator must be massless".into()));
    }
    let l = a.length;
    let th = reduce_angle(a.theta);
    let base_sp = fieldlab_spectra::twisted_circle_spectrum(a, 1)?;
    let base = log_det_zeta(&base_sp)?.log_det;
    let lam = |n: i64, theta: f64| ((2.0 * PI * n as f64 + theta) / l).powi(2);
    let nb = block as i64;
    let (perturbed, log_f) = match *k {
        DiagonalPerturbation::Zero => (base, 0.0),
        DiagonalPerturbation::MassShift { mass } => {
            if !(mass > 0.0) {
                return Err(ZetaError::InvalidArgument("mass must be positive".into()));
            }
            if th != 0.0 {
                return Err(ZetaError::InvalidArgument(
                    "mass shift is implemented for the untwisted circle".into(),
                ));
            }
            let m2 = mass * mass;
            let law = TailLaw::Separable {
                factors: vec![circle_ladder(l, th)?],
                mass2: m2,
            };
            let sp = Spectrum::truncated(vec![m2], 0, 0.0, law)?;
            let pert = log_det_zeta(&sp)?.log_det;
            let mut s = 0.0;
            let mut zero = 0.0;
            for n in (-nb..=nb).rev() {
                let v = lam(n, th);
                if v < 1e-12 {
                    zero += m2.ln();
                } else {
                    s += (m2 / v).ln_1p();
                }
            }
            let c = m2 * l * l / (4.0 * PI * PI);
            s += 2.0 * log1p_tail(c, block)?;
            (pert, s + zero)
        }
        DiagonalPerturbation::TwistChange { theta_to } => {
            let th2 = reduce_angle(theta_to);
            if th == 0.0 || th2 == 0.0 {
                return Err(ZetaError::InvalidArgument(
                    "twist change needs nonzero twists (no kernel)".into(),
                ));
            }
            let sp2 = fieldlab_spectra::twisted_circle_spectrum(
                &TwistedCircle {
                    theta: th2,
                    ..*a
                },
                1,
            )?;
            let pert = log_det_zeta(&sp2)?.log_det;
            let mut s = 0.0;
            for n in (-nb..=nb).rev() {
                s += (lam(n, th2) / lam(n, th)).ln();
            }
            // pair ±n for n > block: log((n²−a′²)/(n²−a²)), squared
            let (a1, a2) = (th / (2.0 * PI), th2 / (2.0 * PI));
            let start = nb as f64 + 1.0;
            let mut tail = 0.0;
            let (mut p1, mut p2) = (1.0, 1.0);
            for j in 1..200 {
                p1 *= a1 * a1;
                p2 *= a2 * a2;
                let t = -(p2 - p1) / j as f64
                    * lerch_sum(Complex64::new(2.0 * j as f64, 0.0), start)?.re;
                tail += t;
                if t.abs() < 1e-18 {
                    break;
                }
            }
            (pert, s + 2.0 * tail)
        }
    };
    let residual = (1.0 - (base + log_f - perturbed).exp()).abs();
    Ok(FactorizationReport {
        log_det_perturbed: perturbed,
        log_det_base: base,
        log_fredholm: log_f,
        block,
        residual,
    })
}
