use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use fieldlab_numerics::{gauss_legendre, QuadratureRule};

use crate::poly::EvenPoly;
use crate::{Result, TransferError};

/// Symmetrized Nyström matrix T_ij = √(w_i w_j)·K(x_i, x_j) with
/// K(x, y) = exp(−(x−y)² − ½(P(x) + P(y))).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransferModel {
    pub p: Option<EvenPoly>,
    pub rule: QuadratureRule,
    pub t_matrix: DMatrix<f64>,
}

pub fn build_transfer(p: &EvenPoly, grid_size: usize, halfwidth: f64) -> Result<TransferModel> {
    if !p.bounded_below() {
        return Err(TransferError::UnboundedBelow);
    }
    if grid_size < 16 {
        return Err(TransferError::InvalidArgument("grid_size must be >= 16".into()));
    }
    if !(halfwidth > 0.0) {
        return Err(TransferError::InvalidArgument("halfwidth must be positive".into()));
    }
    let rule = gauss_legendre(grid_size, -halfwidth, halfwidth)?;
    let x = &rule.nodes;
    let half: Vec<f64> = x
        .iter()
        .zip(&rule.weights)
        .map(|(&xi, &w)| 0.5 * w.ln() - 0.5 * p.eval(xi))
        .collect();
    let n = grid_size;
    let t = DMatrix::from_fn(n, n, |i, j| {
        let d = x[i] - x[j];
        (half[i] + half[j] - d * d).exp()
    });
    Ok(TransferModel {
        p: Some(p.clone()),
        rule,
        t_matrix: t,
    })
}

impl TransferModel {
    /// Wrap an arbitrary symmetric matrix (no potential attached).
    pub fn from_matrix(t: DMatrix<f64>) -> Result<Self> {
        if !t.is_square() || t.nrows() == 0 {
            return Err(TransferError::InvalidArgument("matrix must be square".into()));
        }
        let n = t.nrows();
        let rule = QuadratureRule {
            nodes: (0..n).map(|i| i as f64).collect(),
            weights: vec![1.0; n],
            kind: fieldlab_numerics::QuadKind::Legendre,
            interval: fieldlab_numerics::Interval::Finite(0.0, (n - 1).max(1) as f64),
        };
        Ok(TransferModel {
            p: None,
            rule,
            t_matrix: t,
        })
    }

    pub fn size(&self) -> usize {
        self.t_matrix.nrows()
    }

    /// Diagonal multiplication operator f(x_i) on the grid.
    pub fn observable<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.rule.nodes.iter().map(|&x| f(x)).collect()
    }

    /// Grid function (values at nodes) to its ℓ² representative √w·f.
    pub fn to_l2<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.rule
            .nodes
            .iter()
            .zip(&self.rule.weights)
            .map(|(&x, &w)| w.sqrt() * f(x))
            .collect()
    }

    pub(crate) fn check_confining(&self) -> Result<()> {
        match &self.p {
            Some(p) if !p.confining() => Err(TransferError::Divergent),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positivity_and_symmetry() {
        for p in [EvenPoly::new(vec![0.0]).unwrap(), EvenPoly::quartic()] {
            let m = build_transfer(&p, 64, 3.0).unwrap();
            assert!(m.t_matrix.iter().all(|&v| v > 0.0 && v.is_finite()));
            assert_eq!(m.t_matrix, m.t_matrix.transpose());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let bad = EvenPoly::new(vec![0.0, 1.0, -1.0]).unwrap();
        assert_eq!(build_transfer(&bad, 64, 8.0).unwrap_err(), TransferError::UnboundedBelow);
        assert!(build_transfer(&EvenPoly::quartic(), 8, 8.0).is_err());
        assert!(build_transfer(&EvenPoly::quartic(), 64, 0.0).is_err());
    }
}
