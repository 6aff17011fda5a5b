use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::{invalid, GaussError, Result};

/// Vertex involution fixing `sigma` and swapping `plus` with `minus`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reflection {
    pub perm: Vec<usize>,
    pub plus: Vec<usize>,
    pub sigma: Vec<usize>,
    pub minus: Vec<usize>,
}

/// Precision matrix Q = L_w + diag(m²) with named vertex regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNetwork {
    pub q: DMatrix<f64>,
    pub regions: BTreeMap<String, Vec<usize>>,
    pub reflection: Option<Reflection>,
}

pub(crate) fn select(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub(crate) fn spd_inverse(m: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    if m.nrows() == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let ch = m
        .clone()
        .cholesky()
        .ok_or_else(|| GaussError::NotPositiveDefinite(what.into()))?;
    Ok(ch.inverse())
}

/// Sorted complement of `idx` in 0..n.
pub(crate) fn complement(n: usize, idx: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; n];
    for &i in idx {
        mark[i] = true;
    }
    (0..n).filter(|&i| !mark[i]).collect()
}

pub(crate) fn check_indices(n: usize, idx: &[usize], what: &str) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in idx {
        if i >= n {
            return invalid(format!("{what}: vertex {i} out of range"));
        }
        if seen[i] {
            return invalid(format!("{what}: vertex {i} repeated"));
        }
        seen[i] = true;
    }
    Ok(())
}

impl GaussianNetwork {
    /// Weighted edges (u, v, w > 0) and a per-vertex m² (≥ 0).
    pub fn from_weighted(n: usize, edges: &[(usize, usize, f64)], mass2: &[f64]) -> Result<Self> {
        if n == 0 || mass2.len() != n {
            return invalid("need n > 0 and one mass per vertex");
        }
        let mut q = DMatrix::from_diagonal(&DVector::from_column_slice(mass2));
        for &(u, v, w) in edges {
            if u >= n || v >= n || u == v || !(w > 0.0) {
                return invalid(format!("bad edge ({u}, {v}, {w})"));
            }
            q[(u, u)] += w;
            q[(v, v)] += w;
            q[(u, v)] -= w;
            q[(v, u)] -= w;
        }
        if mass2.iter().any(|m| !(*m >= 0.0)) {
            return invalid("masses must be nonnegative");
        }
        if q.clone().cholesky().is_none() {
            return Err(GaussError::NotPositiveDefinite("Q".into()));
        }
        Ok(GaussianNetwork {
            q,
            regions: BTreeMap::new(),
            reflection: None,
        })
    }

    /// Wrap a symmetric positive-definite precision matrix.
    pub fn from_precision(q: DMatrix<f64>) -> Result<Self> {
        if !q.is_square() || q.nrows() == 0 {
            return invalid("precision must be square and nonempty");
        }
        let scale = q.amax();
        if (&q - q.transpose()).amax() > 1e-14 * scale {
            return invalid("precision must be symmetric");
        }
        if q.clone().cholesky().is_none() {
            return Err(GaussError::NotPositiveDefinite("Q".into()));
        }
        Ok(GaussianNetwork {
            q,
            regions: BTreeMap::new(),
            reflection: None,
        })
    }

    /// Unit-weight graph with uniform mass m.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], m: f64) -> Result<Self> {
        let w: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Self::from_weighted(n, &w, &vec![m * m; n])
    }

    pub fn path(n: usize, m: f64) -> Result<Self> {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &e, m)
    }

    pub fn cycle(n: usize, m: f64) -> Result<Self> {
        if n < 3 {
            return invalid("cycle needs n >= 3");
        }
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &e, m)
    }

    /// rows × cols grid, vertex (r, c) at index r·cols + c.
    pub fn grid(rows: usize, cols: usize, m: f64) -> Result<Self> {
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    e.push((v, v + 1));
                }
                if r + 1 < rows {
                    e.push((v, v + cols));
                }
            }
        }
        Self::from_edges(rows * cols, &e, m)
    }

    /// Connected random graph: a random spanning tree plus each further
    /// edge with probability `p`.
    pub fn random_connected<R: Rng>(n: usize, p: f64, m: f64, rng: &mut R) -> Result<Self> {
        let mut e = Vec::new();
        for v in 1..n {
            e.push((rng.random_range(0..v), v));
        }
        for u in 0..n {
            for v in u + 1..n {
                if !e.contains(&(u, v)) && rng.random_bool(p) {
                    e.push((u, v));
                }
            }
        }
        Self::from_edges(n, &e, m)
    }

    pub fn len(&self) -> usize {
        self.q.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.q.nrows() == 0
    }

    pub fn with_region(mut self, name: &str, vertices: Vec<usize>) -> Result<Self> {
        check_indices(self.len(), &vertices, name)?;
        self.regions.insert(name.to_string(), vertices);
        Ok(self)
    }

    pub fn region(&self, name: &str) -> Result<&[usize]> {
        self.regions
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| GaussError::InvalidArgument(format!("no region named {name}")))
    }

    /// Attach an involution. Checks Θ² = id, ΘᵀQΘ = Q, that Θ fixes σ and
    /// swaps the sides, and that σ separates them.
    pub fn with_reflection(mut self, perm: Vec<usize>, sigma: Vec<usize>) -> Result<Self> {
        let n = self.len();
        if perm.len() != n {
            return invalid("permutation length mismatch");
        }
        check_indices(n, &perm, "perm")?;
        check_indices(n, &sigma, "sigma")?;
        if (0..n).any(|i| perm[perm[i]] != i) {
            return Err(GaussError::Precondition("Θ² ≠ id".into()));
        }
        if sigma.iter().any(|&s| perm[s] != s) {
            return Err(GaussError::Precondition("Θ must fix Σ".into()));
        }
        let scale = self.q.amax();
        for i in 0..n {
            for j in 0..n {
                if (self.q[(perm[i], perm[j])] - self.q[(i, j)]).abs() > 1e-14 * scale {
                    return Err(GaussError::Precondition("Θ does not preserve Q".into()));
                }
            }
        }
        let rest = complement(n, &sigma);
        if rest.iter().any(|&v| perm[v] == v) {
            return Err(GaussError::Precondition("Θ has fixed points off Σ".into()));
        }
        // sides: connected components of the graph minus Σ, paired by Θ
        let comp = components(&self.q, &rest);
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut side = vec![0i8; n];
        for c in &comp {
            let img: Vec<usize> = c.iter().map(|&v| perm[v]).collect();
            if img.iter().any(|v| c.contains(v)) {
                return Err(GaussError::Precondition(
                    "Σ does not separate a component from its mirror".into(),
                ));
            }
            if side[c[0]] == 0 {
                for &v in c {
                    side[v] = 1;
                }
                for &v in &img {
                    side[v] = -1;
                }
            }
        }
        for &v in &rest {
            if side[v] > 0 {
                plus.push(v);
            } else {
                minus.push(v);
            }
        }
        self.reflection = Some(Reflection {
            perm,
            plus,
            sigma,
            minus,
        });
        Ok(self)
    }
}

/// Connected components of the Q-graph induced on `verts`.
pub(crate) fn components(q: &DMatrix<f64>, verts: &[usize]) -> Vec<Vec<usize>> {
    let n = q.nrows();
    let mut inside = vec![false; n];
    for &v in verts {
        inside[v] = true;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for &s in verts {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            for v in 0..n {
                if inside[v] && !seen[v] && q[(u, v)] != 0.0 {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_reflection() {
        let net = GaussianNetwork::path(5, 1.0)
            .unwrap()
            .with_reflection(vec![4, 3, 2, 1, 0], vec![2])
            .unwrap();
        let r = net.reflection.unwrap();
        assert_eq!(r.sigma, vec![2]);
        assert_eq!(r.plus.len(), 2);
        assert_eq!(r.minus.len(), 2);
    }

    #[test]
    fn bad_reflections() {
        let net = GaussianNetwork::path(5, 1.0).unwrap();
        assert!(net.clone().with_reflection(vec![1, 0, 2, 3, 4], vec![2]).is_err());
        assert!(net.clone().with_reflection(vec![4, 3, 2, 1, 0], vec![]).is_err());
        assert!(GaussianNetwork::path(3, 0.0).is_err());
    }
}
