use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{NumericsError, Result};

/// Correction term h^k or h^k·log h in the model f(h) = f₀ + Σ c_j g_j(h).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Basis {
    Power(f64),
    PowerLog(f64),
}

impl Basis {
    fn eval(&self, h: f64) -> f64 {
        match *self {
            Basis::Power(k) => h.powf(k),
            Basis::PowerLog(k) => h.powf(k) * h.ln(),
        }
    }

    pub fn order(&self) -> f64 {
        match *self {
            Basis::Power(k) | Basis::PowerLog(k) => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationResult {
    pub value: f64,
    pub error_estimate: f64,
    pub orders_used: Vec<i32>,
    pub converged: bool,
    /// Limit estimate after eliminating 0, 1, 2, ... correction terms.
    pub stages: Vec<f64>,
}

fn check(samples: &[(f64, f64)]) -> Result<()> {
    if samples.len() < 3 {
        return Err(NumericsError::TooFewSamples {
            need: 3,
            got: samples.len(),
        });
    }
    if samples.iter().any(|&(h, v)| !(h > 0.0) || !v.is_finite()) {
        return Err(NumericsError::InvalidArgument(
            "step sizes must be positive and values finite".into(),
        ));
    }
    if samples.windows(2).any(|w| !(w[1].0 < w[0].0)) {
        return Err(NumericsError::NonMonotone);
    }
    Ok(())
}

/// Limit of the constant term when the last k+1 samples are fitted
/// exactly by f₀ + Σ_{j<k} c_j g_j(h).
fn stage(samples: &[(f64, f64)], basis: &[Basis]) -> Result<f64> {
    let k = basis.len();
    let tail = &samples[samples.len() - k - 1..];
    let mut a = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut rhs = DVector::<f64>::zeros(k + 1);
    for (i, &(h, v)) in tail.iter().enumerate() {
        a[(i, 0)] = 1.0;
        for (j, b) in basis.iter().enumerate() {
            a[(i, j + 1)] = b.eval(h);
        }
        rhs[i] = v;
    }
    // column equilibration; the spanned model is unchanged
    let mut scale = vec![1.0; k + 1];
    for j in 1..=k {
        let m = a.column(j).amax();
        if m > 0.0 {
            scale[j] = m;
            a.column_mut(j).scale_mut(1.0 / m);
        }
    }
    let sol = a.lu().solve(&rhs).ok_or(NumericsError::Singular)?;
    Ok(sol[0] / scale[0])
}

/// Generalized Richardson elimination over an explicit correction basis.
/// Uses as many basis terms as the sample count allows.
pub fn extrapolate(samples: &[(f64, f64)], basis: &[Basis]) -> Result<ExtrapolationResult> {
    check(samples)?;
    let kmax = basis.len().min(samples.len() - 1);
    if kmax == 0 {
        return Err(NumericsError::InvalidArgument("empty basis".into()));
    }
    let mut stages = vec![samples[samples.len() - 1].1];
    for k in 1..=kmax {
        stages.push(stage(samples, &basis[..k])?);
    }
    let errs: Vec<f64> = stages.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    // stage differences at round-off level carry no ordering information
    let floor = 64.0 * f64::EPSILON * stages.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let converged = errs.windows(2).all(|w| w[1] <= w[0].max(floor))
        && stages.iter().all(|v| v.is_finite());
    Ok(ExtrapolationResult {
        value: stages[kmax],
        error_estimate: errs[kmax - 1],
        orders_used: basis[..kmax].iter().map(|b| b.order().round() as i32).collect(),
        converged,
        stages,
    })
}

/// Polynomial Richardson: corrections h^order, h^{order+1}, ...
pub fn richardson(values: &[(f64, f64)], order: u32) -> Result<ExtrapolationResult> {
    if order == 0 {
        return Err(NumericsError::InvalidArgument("order must be positive".into()));
    }
    check(values)?;
    let basis: Vec<Basis> = (0..values.len() - 1)
        .map(|j| Basis::Power((order as usize + j) as f64))
        .collect();
    extrapolate(values, &basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_model() {
        let s: Vec<_> = [0.4, 0.2, 0.1].iter().map(|&h| (h, 1.0 + h)).collect();
        let r = richardson(&s, 1).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn quadratic_model() {
        let s: Vec<_> = [0.4, 0.2, 0.1].iter().map(|&h| (h, 2.0 + 3.0 * h * h)).collect();
        let r = richardson(&s, 2).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn h_log_h_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let c0: f64 = rng.random_range(-2.0..2.0);
            let c1: f64 = rng.random_range(-2.0..2.0);
            let c2: f64 = rng.random_range(-1.0..1.0);
            let s: Vec<_> = (0..6)
                .map(|i| {
                    let h = 0.2 * 0.5f64.powi(i);
                    (h, c0 + c1 * h * h.ln() + c2 * h * h)
                })
                .collect();
            let r = extrapolate(
                &s,
                &[Basis::PowerLog(1.0), Basis::Power(1.0), Basis::Power(2.0)],
            )
            .unwrap();
            assert!((r.value - c0).abs() <= r.error_estimate.max(1e-12));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            richardson(&[(0.2, 1.0), (0.1, 1.0)], 1),
            Err(NumericsError::TooFewSamples { .. })
        ));
        assert!(matches!(
            richardson(&[(0.1, 1.0), (0.2, 1.0), (0.05, 1.0)], 1),
            Err(NumericsError::NonMonotone)
        ));
    }

    #[test]
    fn stage_errors_shrink_when_converged() {
        let s: Vec<_> = (0..6)
            .map(|i| {
                let h = 0.5f64.powi(i);
                (h, 1.0 + h + 0.5 * h * h + 0.1 * h * h * h)
            })
            .collect();
        let r = richardson(&s, 1).unwrap();
        assert!(r.converged);
        let e: Vec<f64> = r.stages.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(e.windows(2).all(|w| w[1] <= w[0]));
        assert!((r.value - 1.0).abs() < 1e-12);
    }
}
