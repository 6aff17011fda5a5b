use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use fieldlab_numerics::sym_eig;

use crate::network::{check_indices, complement, components, select, spd_inverse, GaussianNetwork};
use crate::{invalid, GaussError, Result};

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Q⁻¹.
pub fn covariance(net: &GaussianNetwork) -> Result<DMatrix<f64>> {
    spd_inverse(&net.q, "Q").map(symmetrize)
}

/// Q_II⁻¹·Q_IΣ for I the complement of Σ.
fn interior_solve(q: &DMatrix<f64>, interior: &[usize], sigma: &[usize]) -> Result<DMatrix<f64>> {
    let qii = select(q, interior, interior);
    let qis = select(q, interior, sigma);
    if interior.is_empty() {
        return Ok(DMatrix::zeros(0, sigma.len()));
    }
    let ch = qii
        .cholesky()
        .ok_or_else(|| GaussError::NotPositiveDefinite("interior block".into()))?;
    Ok(ch.solve(&qis))
}

fn dn_of(q: &DMatrix<f64>, sigma: &[usize]) -> Result<DMatrix<f64>> {
    let n = q.nrows();
    check_indices(n, sigma, "sigma")?;
    if sigma.is_empty() {
        return invalid("Σ is empty");
    }
    let interior = complement(n, sigma);
    let x = interior_solve(q, &interior, sigma)?;
    let dn = select(q, sigma, sigma) - select(q, sigma, &interior) * x;
    Ok(symmetrize(dn))
}

/// Schur complement Q_ΣΣ − Q_ΣI·Q_II⁻¹·Q_IΣ.
pub fn dn_schur(net: &GaussianNetwork, sigma: &[usize]) -> Result<DMatrix<f64>> {
    dn_of(&net.q, sigma)
}

fn poisson_of(q: &DMatrix<f64>, sigma: &[usize]) -> Result<DMatrix<f64>> {
    let n = q.nrows();
    check_indices(n, sigma, "sigma")?;
    if sigma.is_empty() {
        return invalid("Σ is empty");
    }
    let interior = complement(n, sigma);
    let x = interior_solve(q, &interior, sigma)?;
    let mut p = DMatrix::zeros(n, sigma.len());
    for (k, &s) in sigma.iter().enumerate() {
        p[(s, k)] = 1.0;
    }
    for (r, &i) in interior.iter().enumerate() {
        for k in 0..sigma.len() {
            p[(i, k)] = -x[(r, k)];
        }
    }
    Ok(p)
}

/// n × |Σ| matrix of the map f ↦ Poisson extension of f.
pub fn poisson_operator(net: &GaussianNetwork, sigma: &[usize]) -> Result<DMatrix<f64>> {
    poisson_of(&net.q, sigma)
}

/// u with u|_Σ = f and (Qu)_I = 0.
pub fn poisson_extend(net: &GaussianNetwork, sigma: &[usize], f: &DVector<f64>) -> Result<DVector<f64>> {
    if f.len() != sigma.len() {
        return invalid("boundary data length mismatch");
    }
    let mut u = poisson_operator(net, sigma)? * f;
    // exact restriction
    for (k, &s) in sigma.iter().enumerate() {
        u[s] = f[k];
    }
    Ok(u)
}

/// How the quadratic form is closed off at the boundary of a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Closure {
    /// Subgraph on Ω ∪ ∂Ω with all its edges and masses.
    Subgraph,
    /// As `Subgraph`, but edges inside ∂Ω and masses on ∂Ω carry half weight,
    /// so two mirror halves add up to the whole network.
    MirrorHalf,
}

/// Closure precision on Ω ∪ ∂Ω, rows ordered as Ω then ∂Ω.
pub fn closure_matrix(
    net: &GaussianNetwork,
    omega: &[usize],
    boundary: &[usize],
    closure: Closure,
) -> Result<DMatrix<f64>> {
    let n = net.len();
    let u: Vec<usize> = omega.iter().chain(boundary).copied().collect();
    check_indices(n, &u, "Ω ∪ ∂Ω")?;
    let q = &net.q;
    let mut qn = select(q, &u, &u);
    let nb = omega.len();
    let mut in_u = vec![false; n];
    for &v in &u {
        in_u[v] = true;
    }
    for (a, &v) in u.iter().enumerate() {
        // drop edges leaving the region: their weight sits on the diagonal
        let outside: f64 = (0..n).filter(|&x| !in_u[x]).map(|x| -q[(v, x)]).sum();
        qn[(a, a)] -= outside;
    }
    if closure == Closure::MirrorHalf {
        let m = qn.nrows();
        for a in nb..m {
            let v = u[a];
            let row_edges: f64 = (0..n).filter(|&x| x != v).map(|x| -q[(v, x)]).sum();
            let mass = q[(v, v)] - row_edges;
            let bb_edges: f64 = (nb..m).filter(|&b| b != a).map(|b| -qn[(a, b)]).sum();
            qn[(a, a)] -= 0.5 * mass + 0.5 * bb_edges;
            for b in nb..m {
                if b != a {
                    qn[(a, b)] *= 0.5;
                }
            }
        }
    }
    Ok(qn)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CnCdReport {
    /// max |PI·DN⁻¹·PIᵀ − (C_N − C_D)|
    pub residual: f64,
    /// Smallest eigenvalue of C_N − C_D.
    pub min_eig: f64,
    /// max |C_N − (C + CΘ)| on Ω ∪ ∂Ω, for the mirror closure of a reflected side.
    pub mirror_residual: Option<f64>,
    pub c_n: DMatrix<f64>,
    pub c_d: DMatrix<f64>,
}

/// Neumann-minus-Dirichlet Green identity on the side Ω ∪ ∂Ω. C_D is the
/// inverse of the network's own Ω-block; C_N, DN and PI come from the closure.
pub fn cn_minus_cd_check(
    net: &GaussianNetwork,
    omega: &[usize],
    boundary: &[usize],
    closure: Closure,
) -> Result<CnCdReport> {
    let n = net.len();
    if omega.is_empty() || boundary.is_empty() {
        return invalid("Ω and ∂Ω must be nonempty");
    }
    let u: Vec<usize> = omega.iter().chain(boundary).copied().collect();
    check_indices(n, &u, "Ω ∪ ∂Ω")?;
    let mut in_u = vec![false; n];
    for &v in &u {
        in_u[v] = true;
    }
    for &w in omega {
        if (0..n).any(|x| !in_u[x] && net.q[(w, x)] != 0.0) {
            return Err(GaussError::Precondition(format!(
                "interior vertex {w} has edges leaving Ω ∪ ∂Ω"
            )));
        }
    }
    let qn = closure_matrix(net, omega, boundary, closure)?;
    let nb = omega.len();
    let m = u.len();
    for a in nb..m {
        if (0..m).all(|b| b == a || qn[(a, b)] == 0.0) && qn[(a, a)] <= 0.0 {
            return Err(GaussError::Precondition(format!(
                "boundary vertex {} is isolated in the closure",
                u[a]
            )));
        }
    }
    let c_n = spd_inverse(&qn, "Neumann closure").map(symmetrize)?;
    let bloc: Vec<usize> = (nb..m).collect();
    let dn = dn_of(&qn, &bloc)?;
    let pi = poisson_of(&qn, &bloc)?;
    let cd_inner = spd_inverse(&select(&net.q, omega, omega), "Dirichlet block").map(symmetrize)?;
    let mut c_d = DMatrix::zeros(m, m);
    c_d.view_mut((0, 0), (nb, nb)).copy_from(&cd_inner);
    let dn_inv = spd_inverse(&dn, "DN")?;
    let lhs = &pi * dn_inv * pi.transpose();
    let diff = &c_n - &c_d;
    let residual = max_abs(&(lhs - &diff));
    let min_eig = sym_eig(&symmetrize(diff))?.values[0];
    let mirror_residual = match (&net.reflection, closure) {
        (Some(r), Closure::MirrorHalf) if same_set(&r.plus, omega) && same_set(&r.sigma, boundary) => {
            let c = covariance(net)?;
            let mut worst: f64 = 0.0;
            for (a, &x) in u.iter().enumerate() {
                for (b, &y) in u.iter().enumerate() {
                    let want = c[(x, y)] + c[(x, r.perm[y])];
                    worst = worst.max((c_n[(a, b)] - want).abs());
                }
            }
            Some(worst)
        }
        _ => None,
    };
    Ok(CnCdReport {
        residual,
        min_eig,
        mirror_residual,
        c_n,
        c_d,
    })
}

fn same_set(a: &[usize], b: &[usize]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovReport {
    /// max |C − (PI·C_ΣΣ·PIᵀ + C_D)|
    pub decomposition_residual: f64,
    /// max |Cov(φ|_Σ, φ − PI φ|_Σ)|
    pub cross_covariance: f64,
    /// Largest conditional covariance between distinct components of V∖Σ₁.
    pub markov_residual: f64,
    /// Disagreement of the two conditioning orders with each other and with
    /// the Schur complement onto Σ₁ ∪ Σ₂; `None` when Σ₂ is empty.
    pub bayes_residual: Option<f64>,
}

fn separated(q: &DMatrix<f64>, sigma: &[usize]) -> Vec<Vec<usize>> {
    components(q, &complement(q.nrows(), sigma))
}

fn joint_precision_by_conditioning(c: &DMatrix<f64>, s1: &[usize], s2: &[usize]) -> Result<DMatrix<f64>> {
    let c11 = select(c, s1, s1);
    let c12 = select(c, s1, s2);
    let c22 = select(c, s2, s2);
    let p1 = spd_inverse(&c11, "C11")?;
    let a = c12.transpose() * &p1; // E[φ₂ | φ₁] = a·φ₁
    let s = &c22 - &a * &c12;
    let sinv = spd_inverse(&symmetrize(s), "conditional covariance")?;
    let (k1, k2) = (s1.len(), s2.len());
    let mut p = DMatrix::zeros(k1 + k2, k1 + k2);
    p.view_mut((0, 0), (k1, k1)).copy_from(&(p1 + a.transpose() * &sinv * &a));
    let off = -(&sinv * &a);
    p.view_mut((k1, 0), (k2, k1)).copy_from(&off);
    p.view_mut((0, k1), (k1, k2)).copy_from(&off.transpose());
    p.view_mut((k1, k1), (k2, k2)).copy_from(&sinv);
    Ok(p)
}

pub fn markov_bayes_check(net: &GaussianNetwork, sigma1: &[usize], sigma2: &[usize]) -> Result<MarkovReport> {
    let n = net.len();
    check_indices(n, sigma1, "Σ₁")?;
    check_indices(n, sigma2, "Σ₂")?;
    if sigma1.is_empty() {
        return invalid("Σ₁ is empty");
    }
    if sigma1.iter().any(|v| sigma2.contains(v)) {
        return invalid("Σ₁ and Σ₂ must be disjoint");
    }
    let comps = separated(&net.q, sigma1);
    if comps.len() < 2 {
        return Err(GaussError::Precondition("Σ₁ does not separate the graph".into()));
    }
    if !sigma2.is_empty() && separated(&net.q, sigma2).len() < 2 {
        return Err(GaussError::Precondition("Σ₂ does not separate the graph".into()));
    }
    let c = covariance(net)?;
    let pi = poisson_operator(net, sigma1)?;
    let interior = complement(n, sigma1);
    let cd_inner = spd_inverse(&select(&net.q, &interior, &interior), "interior")?;
    let mut c_d = DMatrix::zeros(n, n);
    for (a, &x) in interior.iter().enumerate() {
        for (b, &y) in interior.iter().enumerate() {
            c_d[(x, y)] = cd_inner[(a, b)];
        }
    }
    let css = select(&c, sigma1, sigma1);
    let decomposition_residual = max_abs(&(&c - (&pi * &css * pi.transpose() + &c_d)));

    let mut r = DMatrix::zeros(sigma1.len(), n);
    for (k, &s) in sigma1.iter().enumerate() {
        r[(k, s)] = 1.0;
    }
    let proj = DMatrix::identity(n, n) - &pi * &r;
    let cross_covariance = max_abs(&(&r * &c * proj.transpose()));

    let css_inv = spd_inverse(&css, "C_ΣΣ")?;
    let mut markov_residual: f64 = 0.0;
    for (i, a) in comps.iter().enumerate() {
        for b in &comps[i + 1..] {
            let cond = select(&c, a, b) - select(&c, a, sigma1) * &css_inv * select(&c, sigma1, b);
            markov_residual = markov_residual.max(max_abs(&cond));
        }
    }

    let bayes_residual = if sigma2.is_empty() {
        None
    } else {
        let p12 = joint_precision_by_conditioning(&c, sigma1, sigma2)?;
        let p21 = joint_precision_by_conditioning(&c, sigma2, sigma1)?;
        let (k1, k2) = (sigma1.len(), sigma2.len());
        // reorder p21 to (Σ₁, Σ₂)
        let perm: Vec<usize> = (k2..k2 + k1).chain(0..k2).collect();
        let p21 = select(&p21, &perm, &perm);
        let both: Vec<usize> = sigma1.iter().chain(sigma2).copied().collect();
        let dn = dn_schur(net, &both)?;
        let scale = max_abs(&dn).max(1.0);
        Some(max_abs(&(&p12 - &p21)).max(max_abs(&(&p12 - &dn))) / scale)
    };
    Ok(MarkovReport {
        decomposition_residual,
        cross_covariance,
        markov_residual,
        bayes_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpReport {
    /// G_ij = ⟨Θf_i, C f_j⟩
    pub gram: DMatrix<f64>,
    pub min_eig: f64,
    /// max_i |2⟨f_i, ΘC f_i⟩ − ⟨f_i, (C_N − C_D) f_i⟩| with the mirror closure.
    pub identity_residual: f64,
}

/// Reflection-positivity Gram matrix for test vectors supported on Ω₊ ∪ Σ.
pub fn rp_gram(net: &GaussianNetwork, vectors: &[DVector<f64>]) -> Result<RpReport> {
    let r = net
        .reflection
        .as_ref()
        .ok_or_else(|| GaussError::Precondition("network has no reflection".into()))?;
    let n = net.len();
    if vectors.is_empty() {
        return invalid("no test vectors");
    }
    for f in vectors {
        if f.len() != n {
            return invalid("test vector length mismatch");
        }
        if r.minus.iter().any(|&v| f[v] != 0.0) {
            return Err(GaussError::Precondition("test vector support crosses Σ".into()));
        }
    }
    let c = covariance(net)?;
    let theta = |f: &DVector<f64>| DVector::from_fn(n, |i, _| f[r.perm[i]]);
    let cf: Vec<DVector<f64>> = vectors.iter().map(|f| &c * f).collect();
    let k = vectors.len();
    let gram = symmetrize(DMatrix::from_fn(k, k, |i, j| theta(&vectors[i]).dot(&cf[j])));
    let min_eig = sym_eig(&gram)?.values[0];
    let rep = cn_minus_cd_check(net, &r.plus, &r.sigma, Closure::MirrorHalf)?;
    let u: Vec<usize> = r.plus.iter().chain(&r.sigma).copied().collect();
    let mut identity_residual: f64 = 0.0;
    for (i, f) in vectors.iter().enumerate() {
        let fu = DVector::from_fn(u.len(), |a, _| f[u[a]]);
        let rhs = fu.dot(&((&rep.c_n - &rep.c_d) * &fu));
        identity_residual = identity_residual.max((2.0 * gram[(i, i)] - rhs).abs());
    }
    Ok(RpReport {
        gram,
        min_eig,
        identity_residual,
    })
}
