use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::{Result, SpectraError};

/// A finite multigraph with an integer cocycle on its edges and a cover
/// degree. Edge (u, v, s) joins (u, i) to (v, i + s mod N) in the cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverGraph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize, i64)>,
    pub degree: usize,
}

#[derive(Debug, Clone)]
pub struct CoverMatrices {
    pub adjacency: DMatrix<f64>,
    pub laplacian: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct TwistedBlock {
    pub theta: f64,
    pub laplacian: DMatrix<Complex64>,
}

impl CoverGraph {
    /// Cycle C_n with the edge (n−1, 0) marked once.
    pub fn cycle(n: usize, degree: usize) -> Self {
        let edges = (0..n)
            .map(|i| (i, (i + 1) % n, if i + 1 == n { 1 } else { 0 }))
            .collect();
        CoverGraph {
            n_vertices: n,
            edges,
            degree,
        }
    }

    /// From a symmetric 0/1 adjacency matrix and a list of marked edges
    /// (u, v, weight), read with the orientation u → v.
    pub fn from_adjacency(
        adj: &DMatrix<f64>,
        marked: &[(usize, usize, i64)],
        degree: usize,
    ) -> Result<Self> {
        let n = adj.nrows();
        if adj.ncols() != n {
            return Err(SpectraError::InvalidArgument("adjacency not square".into()));
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let a = adj[(u, v)];
                if a != adj[(v, u)] || (a != 0.0 && a != 1.0) {
                    return Err(SpectraError::InvalidArgument(
                        "adjacency must be symmetric 0/1".into(),
                    ));
                }
                if a == 1.0 {
                    let s = marked
                        .iter()
                        .find_map(|&(a, b, w)| {
                            if (a, b) == (u, v) {
                                Some(w)
                            } else if (a, b) == (v, u) {
                                Some(-w)
                            } else {
                                None
                            }
                        })
                        .unwrap_or(0);
                    edges.push((u, v, s));
                }
            }
        }
        Ok(CoverGraph {
            n_vertices: n,
            edges,
            degree,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.degree < 1 {
            return Err(SpectraError::InvalidArgument("cover degree must be >= 1".into()));
        }
        if self.n_vertices == 0 {
            return Err(SpectraError::InvalidArgument("empty base graph".into()));
        }
        if self
            .edges
            .iter()
            .any(|&(u, v, _)| u >= self.n_vertices || v >= self.n_vertices || u == v)
        {
            return Err(SpectraError::InvalidArgument("bad edge endpoint".into()));
        }
        if self.components() != 1 {
            return Err(SpectraError::Disconnected);
        }
        Ok(())
    }

    pub fn components(&self) -> usize {
        let n = self.n_vertices;
        let mut nbr = vec![Vec::new(); n];
        for &(u, v, _) in &self.edges {
            nbr[u].push(v);
            nbr[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &nbr[x] {
                    if !seen[y] {
                        seen[y] = true;
                        q.push_back(y);
                    }
                }
            }
        }
        count
    }

    pub fn base_laplacian(&self) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(self.n_vertices, self.n_vertices);
        for &(u, v, _) in &self.edges {
            l[(u, u)] += 1.0;
            l[(v, v)] += 1.0;
            l[(u, v)] -= 1.0;
            l[(v, u)] -= 1.0;
        }
        l
    }
}

/// Adjacency and Laplacian of the degree-N cover; vertex (v, i) has index
/// i·n + v.
pub fn cycle_cover_build(g: &CoverGraph) -> Result<CoverMatrices> {
    g.validate()?;
    let n = g.n_vertices;
    let big = n * g.degree;
    let nn = g.degree as i64;
    let mut adjacency = DMatrix::zeros(big, big);
    for i in 0..g.degree {
        for &(u, v, s) in &g.edges {
            let j = (i as i64 + s).rem_euclid(nn) as usize;
            let (a, b) = (i * n + u, j * n + v);
            adjacency[(a, b)] += 1.0;
            adjacency[(b, a)] += 1.0;
        }
    }
    let mut laplacian = -adjacency.clone();
    for a in 0..big {
        let d: f64 = adjacency.row(a).sum();
        laplacian[(a, a)] += d;
    }
    Ok(CoverMatrices {
        adjacency,
        laplacian,
    })
}

/// Permutation matrix of the deck shift (v, i) ↦ (v, i+1).
pub fn deck_permutation(g: &CoverGraph) -> DMatrix<f64> {
    let n = g.n_vertices;
    let big = n * g.degree;
    let mut p = DMatrix::zeros(big, big);
    for i in 0..g.degree {
        for v in 0..n {
            p[(((i + 1) % g.degree) * n + v, i * n + v)] = 1.0;
        }
    }
    p
}

/// Base Laplacian with edge (u, v, s) carrying e^{iθs} in the (u, v) slot.
pub fn twisted_laplacian(g: &CoverGraph, theta: f64) -> DMatrix<Complex64> {
    let n = g.n_vertices;
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    for &(u, v, s) in &g.edges {
        let ph = Complex64::from_polar(1.0, theta * s as f64);
        l[(u, u)] += 1.0;
        l[(v, v)] += 1.0;
        l[(u, v)] -= ph;
        l[(v, u)] -= ph.conj();
    }
    l
}

/// The N twisted blocks at θ_p = 2πp/N.
pub fn twisted_block_decompose(g: &CoverGraph) -> Result<Vec<TwistedBlock>> {
    g.validate()?;
    Ok((0..g.degree)
        .map(|p| {
            let theta = 2.0 * PI * p as f64 / g.degree as f64;
            TwistedBlock {
                theta,
                laplacian: twisted_laplacian(g, theta),
            }
        })
        .collect())
}

/// Sorted-ℓ∞ distance between two multisets; infinite on length mismatch.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fieldlab_numerics::{herm_eig, sym_eig};

    fn block_union(g: &CoverGraph) -> Vec<f64> {
        twisted_block_decompose(g)
            .unwrap()
            .iter()
            .flat_map(|b| herm_eig(&b.laplacian).unwrap().values)
            .collect()
    }

    #[test]
    fn triangle_double_cover_is_hexagon() {
        let g = CoverGraph::cycle(3, 2);
        let c = cycle_cover_build(&g).unwrap();
        let hex = cycle_cover_build(&CoverGraph::cycle(6, 1)).unwrap();
        let a = sym_eig(&c.laplacian).unwrap().values;
        let b = sym_eig(&hex.laplacian).unwrap().values;
        assert!(multiset_distance(&a, &b) < 1e-12);
        // every vertex has degree 2 and the cover is connected
        assert!((0..6).all(|i| c.adjacency.row(i).sum() == 2.0));
        let blocks = twisted_block_decompose(&g).unwrap();
        let b0 = herm_eig(&blocks[0].laplacian).unwrap().values;
        let b1 = herm_eig(&blocks[1].laplacian).unwrap().values;
        assert!(multiset_distance(&b0, &[0.0, 3.0, 3.0]) < 1e-12);
        assert!(multiset_distance(&b1, &[1.0, 1.0, 4.0]) < 1e-12);
        let fourier: Vec<f64> = (0..6).map(|k| 2.0 - 2.0 * (PI * k as f64 / 3.0).cos()).collect();
        assert!(multiset_distance(&block_union(&g), &fourier) < 1e-12);
    }

    #[test]
    fn degree_one_cover_is_base() {
        let g = CoverGraph::cycle(3, 1);
        let c = cycle_cover_build(&g).unwrap();
        assert_eq!(c.laplacian, g.base_laplacian());
        let blocks = twisted_block_decompose(&g).unwrap();
        assert_eq!(blocks.len(), 1);
        assert!(blocks[0]
            .laplacian
            .iter()
            .zip(g.base_laplacian().iter())
            .all(|(z, x)| (z.re - x).abs() < 1e-15 && z.im.abs() < 1e-15));
    }

    #[test]
    fn double_edge_unrolls_to_hexagon() {
        let g = CoverGraph {
            n_vertices: 2,
            edges: vec![(0, 1, 0), (0, 1, 1)],
            degree: 3,
        };
        let c = cycle_cover_build(&g).unwrap();
        // explicit unrolling: walk the cover and check it is one 6-cycle
        let n = 6;
        assert!((0..n).all(|i| c.adjacency.row(i).sum() == 2.0));
        let (mut prev, mut cur, mut steps) = (usize::MAX, 0usize, 0);
        loop {
            let next = (0..n)
                .find(|&j| c.adjacency[(cur, j)] > 0.0 && j != prev)
                .unwrap();
            prev = cur;
            cur = next;
            steps += 1;
            if cur == 0 {
                break;
            }
        }
        assert_eq!(steps, 6);
    }

    #[test]
    fn untwisted_block_kernel_counts_components() {
        let g = CoverGraph {
            n_vertices: 4,
            edges: vec![(0, 1, 1), (1, 2, 0), (2, 3, -2), (3, 0, 0), (0, 2, 1)],
            degree: 5,
        };
        let b = &twisted_block_decompose(&g).unwrap()[0];
        let e = herm_eig(&b.laplacian).unwrap();
        assert_eq!(e.values.iter().filter(|v| v.abs() < 1e-10).count(), 1);
    }

    #[test]
    fn errors() {
        let g = CoverGraph {
            n_vertices: 4,
            edges: vec![(0, 1, 1), (2, 3, 0)],
            degree: 2,
        };
        assert!(matches!(cycle_cover_build(&g), Err(SpectraError::Disconnected)));
        let g = CoverGraph::cycle(3, 0);
        assert!(cycle_cover_build(&g).is_err());
    }

    #[test]
    fn from_adjacency_matches_cycle() {
        let mut a = DMatrix::zeros(3, 3);
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        let g = CoverGraph::from_adjacency(&a, &[(2, 0, 1)], 4).unwrap();
        let c = cycle_cover_build(&g).unwrap();
        let ring = cycle_cover_build(&CoverGraph::cycle(12, 1)).unwrap();
        let x = sym_eig(&c.laplacian).unwrap().values;
        let y = sym_eig(&ring.laplacian).unwrap().values;
        assert!(multiset_distance(&x, &y) < 1e-12);
    }
}
