use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::{Result, TransferError};

/// P(σ) = c₀ + c₂σ² + c₄σ⁴ + …, stored as [c₀, c₂, c₄, …].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvenPoly {
    pub coeffs: Vec<f64>,
}

impl EvenPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(TransferError::InvalidArgument("non-finite coefficient".into()));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Ok(EvenPoly { coeffs })
    }

    /// m²σ².
    pub fn mass(m: f64) -> Self {
        EvenPoly {
            coeffs: vec![0.0, m * m],
        }
    }

    pub fn quartic() -> Self {
        EvenPoly {
            coeffs: vec![0.0, 0.0, 1.0],
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let y = x * x;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
    }

    fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    /// Bounded below iff the leading coefficient of a nonconstant P is positive.
    pub fn bounded_below(&self) -> bool {
        self.coeffs.len() == 1 || self.leading() > 0.0
    }

    /// e^{−P} decays at infinity.
    pub fn confining(&self) -> bool {
        self.coeffs.len() > 1 && self.leading() > 0.0
    }

    pub fn scaled_sum(&self, a: f64, other: &EvenPoly, b: f64) -> EvenPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &Vec<f64>, i: usize| v.get(i).copied().unwrap_or(0.0);
        EvenPoly::new((0..n).map(|i| a * get(&self.coeffs, i) + b * get(&other.coeffs, i)).collect())
            .expect("finite")
    }
}

impl FromStr for EvenPoly {
    type Err = TransferError;

    /// Comma-separated even-power coefficients, e.g. "0,-1,1" for σ⁴ − σ².
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| TransferError::InvalidArgument(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        EvenPoly::new(coeffs)
    }
}
