use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{invalid, Result};

/// Heat trace of the length-N·L circle, once from its eigenvalues and once
/// as a sum over deck translates of the free kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatTrace {
    pub eigen_sum: f64,
    pub deck_sum: f64,
}

impl HeatTrace {
    pub fn difference(&self) -> f64 {
        (self.eigen_sum - self.deck_sum).abs()
    }
}

// 1 + 2Σ_{k≥1} e^{−c k²}, smallest terms first
fn gauss_sum(c: f64) -> f64 {
    let kmax = (45.0 / c).sqrt().ceil() as u64 + 1;
    let mut acc = 0.0;
    for k in (1..=kmax).rev() {
        let kf = k as f64;
        acc += (-c * kf * kf).exp();
    }
    1.0 + 2.0 * acc
}

pub fn heat_trace_cover(length: f64, n: usize, t: f64) -> Result<HeatTrace> {
    if !(t > 0.0) || !t.is_finite() {
        return invalid(format!("t must be positive, got {t}"));
    }
    if !(length > 0.0) || n == 0 {
        return invalid("need L > 0 and N >= 1");
    }
    let big = n as f64 * length;
    let eigen_sum = gauss_sum(t * (2.0 * PI / big).powi(2));
    let deck_sum = big / (4.0 * PI * t).sqrt() * gauss_sum(big * big / (4.0 * t));
    Ok(HeatTrace { eigen_sum, deck_sum })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        let h = heat_trace_cover(2.0 * PI, 3, 400.0).unwrap();
        assert!((h.eigen_sum - 1.0).abs() < 1e-10);
        let t = 1e-4;
        let h = heat_trace_cover(1.0, 2, t).unwrap();
        assert!((h.eigen_sum * (4.0 * PI * t).sqrt() / 2.0 - 1.0).abs() < 1e-12);
        assert!(heat_trace_cover(1.0, 2, 0.0).is_err());
        assert!(heat_trace_cover(1.0, 2, -1.0).is_err());
    }
}
