use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::spectrum::Spectrum;
use crate::{NumericsError, Result};

/// Ascending eigenvalues with eigenvectors in matching columns.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl SymEigen {
    /// Interpret the eigenvalues as a finite nonnegative spectrum.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::finite(self.values.clone())
    }
}

impl HermEigen {
    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::finite(self.values.clone())
    }
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    idx
}

const FLUSH: f64 = 1e-40;

/// Dense symmetric eigensolve. Rejects input whose asymmetry exceeds
/// 1e-12 relative to the largest entry.
pub fn sym_eig(a: &DMatrix<f64>) -> Result<SymEigen> {
    if !a.is_square() {
        return Err(NumericsError::InvalidArgument("matrix not square".into()));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(NumericsError::NonFinite);
    }
    let n = a.nrows();
    let scale = a.amax().max(f64::MIN_POSITIVE);
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..i {
            defect = defect.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if defect > 1e-12 * scale {
        return Err(NumericsError::Asymmetric(defect / scale));
    }
    // Entries below FLUSH·max perturb eigenvalues far less than the solver's own
    // eps·‖A‖ accuracy, but extreme dynamic range makes its QR sweeps produce NaN.
    let sym = ((a + a.transpose()) * 0.5).map(|x| if x.abs() < FLUSH * scale { 0.0 } else { x });
    let e = SymmetricEigen::new(sym);
    let idx = sorted_order(e.eigenvalues.as_slice());
    let values = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| e.eigenvectors[(r, idx[c])]);
    Ok(SymEigen { values, vectors })
}

/// Dense Hermitian eigensolve with the same tolerance contract.
pub fn herm_eig(a: &DMatrix<Complex64>) -> Result<HermEigen> {
    if !a.is_square() {
        return Err(NumericsError::InvalidArgument("matrix not square".into()));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(NumericsError::NonFinite);
    }
    let n = a.nrows();
    let scale = a.iter().map(|z| z.norm()).fold(f64::MIN_POSITIVE, f64::max);
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..=i {
            defect = defect.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    if defect > 1e-12 * scale {
        return Err(NumericsError::Asymmetric(defect / scale));
    }
    let herm = ((a + a.adjoint()) * Complex64::new(0.5, 0.0)).map(|z| {
        if z.norm() < FLUSH * scale {
            Complex64::new(0.0, 0.0)
        } else {
            z
        }
    });
    let e = SymmetricEigen::new(herm);
    let idx = sorted_order(e.eigenvalues.as_slice());
    let values = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| e.eigenvectors[(r, idx[c])]);
    Ok(HermEigen { values, vectors })
}
