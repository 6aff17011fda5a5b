use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use fieldlab_numerics::{Ladder, Spectrum, TailLaw};

use crate::{Result, SpectraError};

/// Circle of length L with mass m and holonomy e^{iθ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistedCircle {
    pub length: f64,
    pub mass: f64,
    pub theta: f64,
}

/// Representative of θ in (−π, π].
pub fn reduce_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = theta.rem_euclid(two_pi);
    if r > PI {
        r -= two_pi;
    }
    r
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(SpectraError::InvalidArgument(format!("{name} must be positive, got {x}")))
    }
}

fn nonneg(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(SpectraError::InvalidArgument(format!("{name} must be nonnegative, got {x}")))
    }
}

/// Ladder form of {((2πn+θ)/L)² : n ∈ Z}.
pub fn circle_ladder(length: f64, theta: f64) -> Result<Ladder> {
    positive("L", length)?;
    let a = (reduce_angle(theta) / (2.0 * PI)).abs();
    let scale = 2.0 * PI / length;
    let ladder = if a < 1e-15 {
        Ladder::new(scale, vec![1.0, 1.0], 1)?
    } else {
        Ladder::new(scale, vec![a, 1.0 - a], 0)?
    };
    Ok(ladder)
}

/// Eigenvalues ((2πn+θ)/L)² + m² for all n with |2πn+θ| ≤ 2πn_max + π.
///
/// The window is symmetric in the shifted frequency, so at θ = π both
/// members of each degenerate pair are listed.
pub fn twisted_circle_spectrum(c: &TwistedCircle, n_max: usize) -> Result<Spectrum> {
    positive("L", c.length)?;
    nonneg("m", c.mass)?;
    if n_max == 0 {
        return Err(SpectraError::InvalidArgument("n_max must be positive".into()));
    }
    let th = reduce_angle(c.theta);
    let m2 = c.mass * c.mass;
    let cut = 2.0 * PI * n_max as f64 + PI;
    let nm = n_max as i64 + 1;
    let mut values = Vec::new();
    for n in -nm..=nm {
        let k = 2.0 * PI * n as f64 + th;
        if k.abs() <= cut * (1.0 + 1e-14) {
            values.push((k / c.length).powi(2) + m2);
        }
    }
    let law = TailLaw::Separable {
        factors: vec![circle_ladder(c.length, th)?],
        mass2: m2,
    };
    Ok(Spectrum::truncated(values, n_max, (cut / c.length).powi(2) + m2, law)?)
}

/// min_n ((2πn+θ)/L)², the bottom of the massless twisted circle.
pub fn twisted_circle_lambda0(length: f64, theta: f64) -> f64 {
    (reduce_angle(theta) / length).powi(2)
}

/// (2πj/L1)² + (2πk/L2)² + m² for |j|, |k| ≤ n_max.
pub fn torus_spectrum(l1: f64, l2: f64, m: f64, n_max: usize) -> Result<Spectrum> {
    positive("L1", l1)?;
    positive("L2", l2)?;
    nonneg("m", m)?;
    let nm = n_max as i64;
    let m2 = m * m;
    let mut values = Vec::with_capacity((2 * n_max + 1).pow(2));
    for j in -nm..=nm {
        let a = (2.0 * PI * j as f64 / l1).powi(2);
        for k in -nm..=nm {
            values.push(a + (2.0 * PI * k as f64 / l2).powi(2) + m2);
        }
    }
    let law = TailLaw::Separable {
        factors: vec![circle_ladder(l1, 0.0)?, circle_ladder(l2, 0.0)?],
        mass2: m2,
    };
    let complete = (2.0 * PI * (n_max as f64 + 1.0) / l1.max(l2)).powi(2) + m2;
    Ok(Spectrum::truncated(values, n_max, complete, law)?)
}

/// Dirichlet spectrum of −d²/dx² + μ² on [0, T].
pub fn interval_dirichlet_spectrum(t: f64, mu: f64, j_max: usize) -> Result<Spectrum> {
    positive("T", t)?;
    nonneg("mu", mu)?;
    let m2 = mu * mu;
    let values = (1..=j_max).map(|j| (PI * j as f64 / t).powi(2) + m2).collect();
    let law = TailLaw::Separable {
        factors: vec![Ladder::new(PI / t, vec![1.0], 0)?],
        mass2: m2,
    };
    let complete = (PI * (j_max as f64 + 1.0) / t).powi(2) + m2;
    Ok(Spectrum::truncated(values, j_max, complete, law)?)
}

/// Dirichlet interval [0, L1] times a circle of length L2, plus m².
pub fn dirichlet_cylinder_spectrum(l1: f64, l2: f64, m: f64, n_max: usize) -> Result<Spectrum> {
    positive("L1", l1)?;
    positive("L2", l2)?;
    nonneg("m", m)?;
    let m2 = m * m;
    let nm = n_max as i64;
    let mut values = Vec::new();
    for j in 1..=n_max.max(1) {
        let a = (PI * j as f64 / l1).powi(2);
        for k in -nm..=nm {
            values.push(a + (2.0 * PI * k as f64 / l2).powi(2) + m2);
        }
    }
    let law = TailLaw::Separable {
        factors: vec![Ladder::new(PI / l1, vec![1.0], 0)?, circle_ladder(l2, 0.0)?],
        mass2: m2,
    };
    let complete = (PI * (n_max as f64 + 1.0) / l1)
        .min(2.0 * PI * (n_max as f64 + 1.0) / l2)
        .powi(2)
        + m2;
    Ok(Spectrum::truncated(values, n_max, complete, law)?)
}
