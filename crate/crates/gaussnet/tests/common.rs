#![allow(dead_code)]
use fieldlab_gaussnet::GaussianNetwork;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_net(rng: &mut ChaCha8Rng) -> GaussianNetwork {
    let n = rng.random_range(4..=60);
    let m = rng.random_range(0.3..1.5);
    GaussianNetwork::random_connected(n, 3.0 / n as f64, m, rng).unwrap()
}

pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        v.swap(i, j);
    }
    v.truncate(k);
    v
}

/// Vertex boundary of `omega`: outside vertices adjacent to it.
pub fn vertex_boundary(q: &DMatrix<f64>, omega: &[usize]) -> Vec<usize> {
    let n = q.nrows();
    (0..n)
        .filter(|v| !omega.contains(v) && omega.iter().any(|&w| q[(w, *v)] != 0.0))
        .collect()
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

pub fn inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.clone().try_inverse().unwrap()
}

pub fn sub(m: &DMatrix<f64>, r: &[usize], c: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(r.len(), c.len(), |i, j| m[(r[i], c[j])])
}

/// Path 0..2k with the reflection i ↦ 2k − i about the middle vertex.
pub fn mirror_path(k: usize, m: f64) -> GaussianNetwork {
    let n = 2 * k + 1;
    GaussianNetwork::path(n, m)
        .unwrap()
        .with_reflection((0..n).rev().collect(), vec![k])
        .unwrap()
}

/// rows × (2h+1) grid reflected about its middle column.
pub fn mirror_grid(rows: usize, h: usize, m: f64) -> GaussianNetwork {
    let cols = 2 * h + 1;
    let perm = (0..rows * cols)
        .map(|v| (v / cols) * cols + (cols - 1 - v % cols))
        .collect();
    let sigma = (0..rows).map(|r| r * cols + h).collect();
    GaussianNetwork::grid(rows, cols, m)
        .unwrap()
        .with_reflection(perm, sigma)
        .unwrap()
}
