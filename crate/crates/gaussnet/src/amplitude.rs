use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::green::{closure_matrix, Closure};
use crate::network::{check_indices, complement, select, GaussianNetwork};
use crate::{invalid, GaussError, Result};

/// A network with ordered incoming and outgoing boundary vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub net: GaussianNetwork,
    pub inn: Vec<usize>,
    pub out: Vec<usize>,
}

/// K(x_out, x_in) = exp(log_norm − ½·xᵀPx), x = (x_out, x_in); `delta`
/// marks the identity kernel δ(x_out − x_in).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryKernel {
    pub n_out: usize,
    pub n_in: usize,
    pub precision: DMatrix<f64>,
    pub log_norm: f64,
    pub delta: bool,
}

fn log_det_spd(m: &DMatrix<f64>, what: &str) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    let ch = m
        .clone()
        .cholesky()
        .ok_or_else(|| GaussError::NotPositiveDefinite(what.into()))?;
    Ok(2.0 * ch.l().diagonal().iter().map(|d| d.ln()).sum::<f64>())
}

/// Integrate out the variables `sigma` of exp(−½ zᵀMz).
fn marginalize(m: &DMatrix<f64>, keep: &[usize], sigma: &[usize]) -> Result<(DMatrix<f64>, f64)> {
    let mss = select(m, sigma, sigma);
    let mks = select(m, keep, sigma);
    let mut p = select(m, keep, keep);
    let mut log_norm = 0.0;
    if !sigma.is_empty() {
        let ch = mss
            .clone()
            .cholesky()
            .ok_or_else(|| GaussError::NotPositiveDefinite("integrated block".into()))?;
        p -= &mks * ch.solve(&mks.transpose());
        log_norm = 0.5 * sigma.len() as f64 * (2.0 * PI).ln() - 0.5 * log_det_spd(&mss, "integrated block")?;
    }
    Ok(((&p + p.transpose()) * 0.5, log_norm))
}

impl BoundaryKernel {
    pub fn identity(k: usize) -> Self {
        BoundaryKernel {
            n_out: k,
            n_in: k,
            precision: DMatrix::zeros(0, 0),
            log_norm: 0.0,
            delta: true,
        }
    }

    /// Gaussian integral over the interior of the piece.
    pub fn of_piece(p: &Piece) -> Result<Self> {
        let n = p.net.len();
        let b: Vec<usize> = p.out.iter().chain(&p.inn).copied().collect();
        check_indices(n, &b, "boundary")?;
        let interior = complement(n, &b);
        let (precision, log_norm) = marginalize(&p.net.q, &b, &interior)?;
        Ok(BoundaryKernel {
            n_out: p.out.len(),
            n_in: p.inn.len(),
            precision,
            log_norm,
            delta: false,
        })
    }

    /// Total mass ∫K over all boundary variables (the partition function
    /// when the kernel has no boundary).
    pub fn total_integral(&self) -> Result<f64> {
        let all: Vec<usize> = (0..self.n_out + self.n_in).collect();
        let (_, ln) = marginalize(&self.precision, &[], &all)?;
        Ok(self.log_norm + ln)
    }
}

/// ∫ K₂(x_out, σ)·K₁(σ, x_in) dσ.
pub fn compose(k2: &BoundaryKernel, k1: &BoundaryKernel) -> Result<BoundaryKernel> {
    if k2.n_in != k1.n_out {
        return invalid(format!("Σ sizes differ: {} vs {}", k2.n_in, k1.n_out));
    }
    if k2.delta {
        return Ok(k1.clone());
    }
    if k1.delta {
        return Ok(k2.clone());
    }
    let (b, s, a) = (k2.n_out, k2.n_in, k1.n_in);
    // variables ordered (b, σ, a)
    let mut m = DMatrix::zeros(b + s + a, b + s + a);
    m.view_mut((0, 0), (b + s, b + s)).copy_from(&k2.precision);
    let mut v = m.view_mut((b, b), (s + a, s + a));
    v += &k1.precision;
    let keep: Vec<usize> = (0..b).chain(b + s..b + s + a).collect();
    let sigma: Vec<usize> = (b..b + s).collect();
    let (precision, ln) = marginalize(&m, &keep, &sigma)?;
    Ok(BoundaryKernel {
        n_out: b,
        n_in: a,
        precision,
        log_norm: k1.log_norm + k2.log_norm + ln,
        delta: false,
    })
}

/// Identify `p1.out` with `p2.inn` (in order) and add the precisions.
pub fn glue(p1: &Piece, p2: &Piece) -> Result<Piece> {
    if p1.out.len() != p2.inn.len() {
        return invalid("mismatched Σ sizes");
    }
    let n1 = p1.net.len();
    let n2 = p2.net.len();
    let mut map = vec![usize::MAX; n2];
    for (k, &v) in p2.inn.iter().enumerate() {
        map[v] = p1.out[k];
    }
    let mut next = n1;
    for m in map.iter_mut() {
        if *m == usize::MAX {
            *m = next;
            next += 1;
        }
    }
    let mut q = DMatrix::zeros(next, next);
    q.view_mut((0, 0), (n1, n1)).copy_from(&p1.net.q);
    for i in 0..n2 {
        for j in 0..n2 {
            q[(map[i], map[j])] += p2.net.q[(i, j)];
        }
    }
    Ok(Piece {
        net: GaussianNetwork::from_precision(q)?,
        inn: p1.inn.clone(),
        out: p2.out.iter().map(|&v| map[v]).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposeReport {
    pub composed: BoundaryKernel,
    pub glued: BoundaryKernel,
    /// max |P_composed − P_glued| / max(1, max|P_glued|)
    pub precision_residual: f64,
    pub log_norm_residual: f64,
}

/// Compose the boundary kernels of two pieces and compare with the kernel
/// of the glued network. `None` for `p2` composes with the identity.
pub fn amplitude_compose(p1: &Piece, p2: Option<&Piece>) -> Result<ComposeReport> {
    let k1 = BoundaryKernel::of_piece(p1)?;
    let (composed, glued) = match p2 {
        Some(p2) => {
            let k2 = BoundaryKernel::of_piece(p2)?;
            (compose(&k2, &k1)?, BoundaryKernel::of_piece(&glue(p1, p2)?)?)
        }
        None => (compose(&BoundaryKernel::identity(k1.n_out), &k1)?, k1.clone()),
    };
    if composed.precision.shape() != glued.precision.shape() {
        return invalid("composed and glued kernels have different shapes");
    }
    let scale = glued.precision.amax().max(1.0);
    let precision_residual = if glued.precision.is_empty() {
        0.0
    } else {
        (&composed.precision - &glued.precision).amax() / scale
    };
    Ok(ComposeReport {
        precision_residual,
        log_norm_residual: (composed.log_norm - glued.log_norm).abs(),
        composed,
        glued,
    })
}

/// The two mirror halves of a reflected network: Ω₊ ∪ Σ with out = Σ and
/// Σ ∪ Ω₋ with in = Σ, each closed with half weights on Σ.
pub fn mirror_pieces(net: &GaussianNetwork) -> Result<(Piece, Piece)> {
    let r = net
        .reflection
        .as_ref()
        .ok_or_else(|| GaussError::Precondition("network has no reflection".into()))?;
    let k = r.sigma.len();
    let qp = closure_matrix(net, &r.plus, &r.sigma, Closure::MirrorHalf)?;
    let qm = closure_matrix(net, &r.minus, &r.sigma, Closure::MirrorHalf)?;
    let np = r.plus.len();
    let nm = r.minus.len();
    Ok((
        Piece {
            net: GaussianNetwork::from_precision(qp)?,
            inn: vec![],
            out: (np..np + k).collect(),
        },
        Piece {
            net: GaussianNetwork::from_precision(qm)?,
            inn: (nm..nm + k).collect(),
            out: vec![],
        },
    ))
}

/// Reference Gaussian on Σ with precision R = 2·diag(DN of the piece).
pub fn reference_precision(k: &BoundaryKernel) -> DMatrix<f64> {
    DMatrix::from_diagonal(&(k.precision.diagonal() * 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublingReport {
    /// log Z of the whole network from its precision.
    pub log_z_direct: f64,
    /// log ∫|U|² dρ with U the half amplitude relative to the reference ρ.
    pub log_z_doubled: f64,
}

/// Z = ∫|U(σ)|² dρ(σ) for U = K₊·ρ^{−1/2}.
pub fn doubling_check(net: &GaussianNetwork) -> Result<DoublingReport> {
    let (plus, _) = mirror_pieces(net)?;
    let k = BoundaryKernel::of_piece(&plus)?;
    let r = reference_precision(&k);
    let s = r.nrows();
    let log_rho_norm = -0.5 * s as f64 * (2.0 * PI).ln() + 0.5 * log_det_spd(&r, "reference")?;
    // U = exp(log_norm − ½ log_rho_norm − ½σᵀ(P − R/2)σ); |U|²ρ has precision 2P − R + R
    let u_prec = &k.precision - &r * 0.5;
    let u_log = k.log_norm - 0.5 * log_rho_norm;
    let integrand = &u_prec * 2.0 + &r;
    let all: Vec<usize> = (0..s).collect();
    let (_, ln) = marginalize(&integrand, &[], &all)?;
    let log_z_doubled = 2.0 * u_log + log_rho_norm + ln;
    let n = net.len();
    let log_z_direct = 0.5 * n as f64 * (2.0 * PI).ln() - 0.5 * log_det_spd(&net.q, "Q")?;
    Ok(DoublingReport {
        log_z_direct,
        log_z_doubled,
    })
}
