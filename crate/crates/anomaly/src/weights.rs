use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::sphere::{geodesic_distance, SpherePoint};
use crate::{AnomalyError, Result};

/// Branch data of a degree-d map onto the sphere: for each critical
/// value, the ramification orders of its preimages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchData {
    pub degree: u32,
    pub fibers: Vec<Vec<u32>>,
}

impl BranchData {
    pub fn new(degree: u32, fibers: Vec<Vec<u32>>) -> Result<Self> {
        if degree == 0 {
            return Err(AnomalyError::InvalidArgument("degree must be positive".into()));
        }
        for f in &fibers {
            if f.iter().any(|&o| o == 0) || f.iter().sum::<u32>() != degree {
                return Err(AnomalyError::InvalidArgument(format!(
                    "fiber {f:?} does not sum to the degree {degree}"
                )));
            }
        }
        let b = BranchData { degree, fibers };
        b.genus()?;
        Ok(b)
    }

    /// z ↦ z^d: total ramification over 0 and ∞.
    pub fn power(d: u32) -> Result<Self> {
        Self::new(d, vec![vec![d], vec![d]])
    }

    /// Genus of the covering surface by Riemann–Hurwitz over the sphere.
    pub fn genus(&self) -> Result<u32> {
        let ram: i64 = self.fibers.iter().flatten().map(|&o| o as i64 - 1).sum();
        let two_g = 2 - 2 * self.degree as i64 + ram;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(AnomalyError::InvalidArgument(format!(
                "branch data violate Riemann–Hurwitz (2g = {two_g})"
            )));
        }
        Ok((two_g / 2) as u32)
    }

    /// Postcompose with w ↦ w^a, where the critical value `over` of this
    /// map sits at w = 0: orders over 0 multiply by a.
    pub fn then_power_at(&self, over: usize, a: u32) -> Result<Vec<u32>> {
        let f = self
            .fibers
            .get(over)
            .ok_or_else(|| AnomalyError::InvalidArgument(format!("no fiber {over}")))?;
        Ok(f.iter().map(|&o| o * a).collect())
    }
}

/// Weight (c/12)(k − 1/k) of a ramification point of order k.
pub fn ramification_weight(order: u32, c: Rational64) -> Rational64 {
    let k = Rational64::from_integer(order as i64);
    c / 12 * (k - k.recip())
}

/// (c/12)γ(γ+2)/(γ+1) for a cone of exponent γ > −1.
pub fn conical_weight(gamma: Rational64, c: Rational64) -> Result<Rational64> {
    if gamma <= Rational64::from_integer(-1) {
        return Err(AnomalyError::InvalidArgument("cone exponent must exceed −1".into()));
    }
    let one = Rational64::from_integer(1);
    Ok(c / 12 * gamma * (gamma + 2) / (gamma + one))
}

/// Summed weight of each fiber.
pub fn branched_weights(data: &BranchData, c: Rational64) -> Vec<Rational64> {
    data.fibers
        .iter()
        .map(|f| f.iter().map(|&o| ramification_weight(o, c)).sum())
        .collect()
}

/// Exponent −(c/6)(d − 1/d) of the d-sheeted trace.
pub fn renyi_exponent(d: u32, c: Rational64) -> Result<Rational64> {
    if d == 0 {
        return Err(AnomalyError::InvalidArgument("replica index must be positive".into()));
    }
    Ok(-ramification_weight(d, c) * 2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenyiValue {
    pub trace: f64,
    pub entropy: f64,
    pub exponent: f64,
    pub chord: f64,
}

/// Tr ρ^d = C·((L/π) sin(πℓ/L))^{−(c/6)(d−1/d)} and S_d = log Tr ρ^d/(1 − d)
/// for an interval of length ℓ on a circle of length L.
pub fn renyi_entropy(l: f64, ell: f64, d: u32, c: f64, norm: f64) -> Result<RenyiValue> {
    if d < 2 {
        return Err(AnomalyError::InvalidArgument("replica index must be at least 2".into()));
    }
    if !(norm > 0.0) || !c.is_finite() || !(l > 0.0) {
        return Err(AnomalyError::InvalidArgument("need L > 0, C > 0 and finite c".into()));
    }
    if !(ell > 0.0 && ell < l) {
        return Err(AnomalyError::Precondition(format!("interval ℓ = {ell} must lie in (0, L = {l})")));
    }
    let df = d as f64;
    let exponent = -(c / 6.0) * (df - 1.0 / df);
    let chord = l / PI * (PI * ell / l).sin();
    let log_trace = norm.ln() + exponent * chord.ln();
    Ok(RenyiValue {
        trace: log_trace.exp(),
        entropy: log_trace / (1.0 - df),
        exponent,
        chord,
    })
}

/// C·sin(d_FS(u, v)/2)^{−2Δ}.
pub fn two_point_form(u: SpherePoint, v: SpherePoint, delta: f64, norm: f64) -> Result<f64> {
    let d = geodesic_distance(u.0, v.0);
    if d == 0.0 {
        return Err(AnomalyError::InvalidArgument("coincident points".into()));
    }
    Ok(norm * (0.5 * d).sin().powf(-2.0 * delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn power_map_weights() {
        let c = r(1, 1);
        let b = BranchData::power(3).unwrap();
        assert_eq!(b.genus().unwrap(), 0);
        assert_eq!(branched_weights(&b, c), vec![r(2, 9), r(2, 9)]);
        assert_eq!(renyi_exponent(3, c).unwrap(), r(-4, 9));
        assert_eq!(renyi_exponent(1, c).unwrap(), r(0, 1));
        // γ = d − 1 reproduces the ramification weight
        assert_eq!(conical_weight(r(2, 1), c).unwrap(), ramification_weight(3, c));
    }

    #[test]
    fn bad_branch_data() {
        assert!(BranchData::new(3, vec![vec![2, 2]]).is_err());
        assert!(BranchData::new(2, vec![vec![2]]).is_err());
        assert!(BranchData::new(2, vec![vec![2], vec![2], vec![2], vec![2]]).unwrap().genus().unwrap() == 1);
    }
}
