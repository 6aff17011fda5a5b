use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use fieldlab_numerics::sym_eig;

use crate::model::TransferModel;
use crate::{Result, TransferError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopEigenpair {
    pub lambda0: f64,
    /// Unit ℓ² eigenvector, sign chosen so its entries sum positively.
    pub omega0: Vec<f64>,
    pub lambda1: f64,
    pub alpha: f64,
}

struct Decomp {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn decompose(model: &TransferModel) -> Result<Decomp> {
    let e = sym_eig(&model.t_matrix)?;
    Ok(Decomp {
        values: e.values,
        vectors: e.vectors,
    })
}

/// Perron–Frobenius data. Errors when λ₀ − |λ₁| < 1e−10·λ₀.
pub fn top_eigenpair(model: &TransferModel) -> Result<TopEigenpair> {
    let d = decompose(model)?;
    let n = d.values.len();
    // largest in magnitude
    let top = (0..n)
        .max_by(|&i, &j| d.values[i].abs().total_cmp(&d.values[j].abs()))
        .unwrap();
    let lambda0 = d.values[top];
    let lambda1 = (0..n)
        .filter(|&i| i != top)
        .map(|i| d.values[i].abs())
        .fold(0.0, f64::max);
    let gap = lambda0 - lambda1;
    if !(lambda0 > 0.0) || gap < 1e-10 * lambda0.abs() {
        return Err(TransferError::DegenerateGap { lambda0, gap });
    }
    let mut v: DVector<f64> = d.vectors.column(top).into_owned();
    if v.sum() < 0.0 {
        v = -v;
    }
    // Polish with power steps from |v|: a positive kernel keeps the iterate
    // positive, so tails below the eigensolver's noise floor keep their sign.
    v.apply(|x| *x = x.abs());
    let alpha = lambda1 / lambda0;
    let steps = ((-36.0 / alpha.max(1e-300).ln()).ceil() as usize).clamp(1, 400);
    for _ in 0..steps {
        v = &model.t_matrix * &v;
        let nv = v.norm();
        if !(nv > 0.0) {
            return Err(TransferError::DegenerateGap { lambda0, gap });
        }
        v /= nv;
    }
    let omega0: Vec<f64> = v.iter().copied().collect();
    Ok(TopEigenpair {
        lambda0,
        omega0,
        lambda1,
        alpha: lambda1 / lambda0,
    })
}

/// log tr(T^N), accumulated relative to λ₀.
pub fn log_partition_function(model: &TransferModel, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(TransferError::InvalidArgument("N must be >= 1".into()));
    }
    model.check_confining()?;
    let d = decompose(model)?;
    let lmax = d.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut ratios: Vec<f64> = d.values.iter().map(|v| (v / lmax).powi(n as i32)).collect();
    ratios.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let s: f64 = ratios.iter().sum();
    if !(s > 0.0) {
        return Err(TransferError::InvalidArgument("nonpositive trace".into()));
    }
    Ok(n as f64 * lmax.ln() + s.ln())
}

/// tr(T^N). May overflow to ∞ for large N; use [`log_partition_function`].
pub fn partition_function(model: &TransferModel, n: usize) -> Result<f64> {
    Ok(log_partition_function(model, n)?.exp())
}

/// Observables (diagonal on the grid) inserted at increasing sites of a
/// periodic chain of length N.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GibbsQuery {
    pub observables: Vec<Vec<f64>>,
    pub positions: Vec<usize>,
    pub n: usize,
}

/// tr(T^{N+1−i_k} F_k ⋯ F₁ T^{i₁−1}) / tr(T^N).
pub fn gibbs_expectation(model: &TransferModel, q: &GibbsQuery) -> Result<f64> {
    let k = q.observables.len();
    if k == 0 {
        return Err(TransferError::InvalidArgument("no observables".into()));
    }
    if q.positions.len() != k {
        return Err(TransferError::InvalidArgument(
            "one position per observable".into(),
        ));
    }
    if q.positions[0] < 1
        || *q.positions.last().unwrap() > q.n
        || q.positions.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(TransferError::InvalidArgument(
            "positions must satisfy 1 <= i1 < ... < ik <= N".into(),
        ));
    }
    let size = model.size();
    if q.observables.iter().any(|f| f.len() != size) {
        return Err(TransferError::InvalidArgument("observable length != grid".into()));
    }
    let d = decompose(model)?;
    let lmax = d.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let r: Vec<f64> = d.values.iter().map(|v| v / lmax).collect();
    let diag_pow = |a: usize| DVector::from_iterator(size, r.iter().map(|x| x.powi(a as i32)));
    // F in the eigenbasis
    let v = &d.vectors;
    let tilde: Vec<DMatrix<f64>> = q
        .observables
        .iter()
        .map(|f| {
            let mut vf = v.clone();
            for (i, mut row) in vf.row_iter_mut().enumerate() {
                row *= f[i];
            }
            v.transpose() * vf
        })
        .collect();
    // cyclic product starting after F_k: T^{wrap} F₁ T^{i₂−i₁} F₂ … F_k
    let wrap = q.n - (q.positions[k - 1] - q.positions[0]);
    let mut m = DMatrix::from_diagonal(&diag_pow(wrap));
    for j in 0..k {
        m = &m * &tilde[j];
        if j + 1 < k {
            let gap = q.positions[j + 1] - q.positions[j];
            let dg = diag_pow(gap);
            for (c, mut col) in m.column_iter_mut().enumerate() {
                col *= dg[c];
            }
        }
    }
    let num = m.trace();
    let den: f64 = diag_pow(q.n).sum();
    Ok(num / den)
}

/// max_k (|⟨F, Û^k G⟩ − ⟨F,Ω₀⟩⟨Ω₀,G⟩| − α^k‖F‖‖G‖) for Û = T/λ₀, with Û^k G
/// formed by repeated multiplication.
pub fn mixing_check(model: &TransferModel, f: &[f64], g: &[f64], k_max: usize) -> Result<f64> {
    let n = model.size();
    if f.len() != n || g.len() != n {
        return Err(TransferError::InvalidArgument("vector length != grid".into()));
    }
    let top = top_eigenpair(model)?;
    let om = DVector::from_column_slice(&top.omega0);
    let fv = DVector::from_column_slice(f);
    let mut u = DVector::from_column_slice(g);
    let base = fv.dot(&om) * om.dot(&u);
    let norms = fv.norm() * u.norm();
    let uhat = &model.t_matrix / top.lambda0;
    let mut slack = f64::NEG_INFINITY;
    for k in 0..=k_max {
        let diff = (fv.dot(&u) - base).abs();
        slack = slack.max(diff - top.alpha.powi(k as i32) * norms);
        u = &uhat * u;
    }
    Ok(slack)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreeEnergy {
    pub n_list: Vec<usize>,
    pub densities: Vec<f64>,
    /// log λ₀
    pub limit: f64,
    /// Fit |f_N − log λ₀| ≈ C·rate^N over the nonzero differences.
    pub fit_rate: Option<f64>,
    pub fit_const: Option<f64>,
}

pub fn free_energy_density(model: &TransferModel, n_list: &[usize]) -> Result<FreeEnergy> {
    model.check_confining()?;
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(TransferError::InvalidArgument("N_list must increase".into()));
    }
    let top = top_eigenpair(model)?;
    let limit = top.lambda0.ln();
    let densities = n_list
        .iter()
        .map(|&n| Ok(log_partition_function(model, n)? / n as f64))
        .collect::<Result<Vec<f64>>>()?;
    let pts: Vec<(f64, f64)> = n_list
        .iter()
        .zip(&densities)
        .filter(|(_, &f)| (f - limit).abs() > 1e-15 * limit.abs().max(1.0))
        .map(|(&n, &f)| (n as f64, (f - limit).abs().ln()))
        .collect();
    let (fit_rate, fit_const) = if pts.len() >= 2 {
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        let icpt = (sy - slope * sx) / m;
        (Some(slope.exp()), Some(icpt.exp()))
    } else {
        (None, None)
    };
    Ok(FreeEnergy {
        n_list: n_list.to_vec(),
        densities,
        limit,
        fit_rate,
        fit_const,
    })
}
