mod common;

use common::*;
use fieldlab_gaussnet::*;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

#[test]
fn decoupled_vertices() {
    let net = GaussianNetwork::from_edges(4, &[], 1.0).unwrap();
    let dn = dn_schur(&net, &[1, 3]).unwrap();
    assert_eq!(dn, DMatrix::identity(2, 2));
    assert!(dn_schur(&net, &[]).is_err());
}

#[test]
fn path_of_three() {
    let net = GaussianNetwork::path(3, 1.0).unwrap();
    let dn = dn_schur(&net, &[0, 2]).unwrap();
    // Q = [[2,−1,0],[−1,3,−1],[0,−1,2]]; eliminating the middle gives Q_ΣΣ − (1/3)·J
    let want = DMatrix::from_row_slice(2, 2, &[2.0 - 1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 2.0 - 1.0 / 3.0]);
    assert!(max_abs(&(&dn - &want)) < 1e-15);
    let c = inverse(&net.q);
    let block = sub(&c, &[0, 2], &[0, 2]);
    assert!(max_abs(&(inverse(&dn) - block)) < 1e-15);
}

#[test]
fn schur_duality_random_graphs() {
    let mut r = rng(1);
    for _ in 0..100 {
        let net = random_net(&mut r);
        let n = net.len();
        let k = r.random_range(1..n);
        let sigma = random_subset(&mut r, n, k);
        let dn = dn_schur(&net, &sigma).unwrap();
        let c = covariance(&net).unwrap();
        let err = max_abs(&(inverse(&dn) - sub(&c, &sigma, &sigma)));
        assert!(err <= 1e-12 * max_abs(&c).max(1.0), "{err:e}");
        assert!(fieldlab_numerics::sym_eig(&dn).unwrap().values[0] > 0.0);
    }
}

#[test]
fn dn_adds_over_mirror_halves() {
    let net = mirror_grid(4, 2, 0.8);
    let r = net.reflection.clone().unwrap();
    let full = dn_schur(&net, &r.sigma).unwrap();
    let k = r.sigma.len();
    let side = |omega: &[usize]| {
        let q = closure_matrix(&net, omega, &r.sigma, Closure::MirrorHalf).unwrap();
        let half = GaussianNetwork::from_precision(q).unwrap();
        let b: Vec<usize> = (omega.len()..omega.len() + k).collect();
        dn_schur(&half, &b).unwrap()
    };
    let sum = side(&r.plus) + side(&r.minus);
    assert!(max_abs(&(&full - &sum)) < 1e-13);
}

#[test]
fn poisson_extension() {
    let net = GaussianNetwork::grid(4, 5, 1.0).unwrap();
    let sigma: Vec<usize> = (0..5).collect();
    let u = poisson_extend(&net, &sigma, &DVector::zeros(5)).unwrap();
    assert!(u.iter().all(|&x| x == 0.0));
    let light = GaussianNetwork::grid(4, 5, 1e-6).unwrap();
    let u = poisson_extend(&light, &sigma, &DVector::from_element(5, 2.5)).unwrap();
    assert!(u.iter().all(|&x| (x - 2.5).abs() < 1e-8));

    let mut r = rng(2);
    for _ in 0..100 {
        let net = random_net(&mut r);
        let n = net.len();
        let k = r.random_range(1..n);
        let sigma = random_subset(&mut r, n, k);
        let f = DVector::from_fn(k, |_, _| r.random_range(-1.0..1.0));
        let u = poisson_extend(&net, &sigma, &f).unwrap();
        for (j, &s) in sigma.iter().enumerate() {
            assert_eq!(u[s], f[j]);
        }
        let qu = &net.q * &u;
        for v in 0..n {
            if !sigma.contains(&v) {
                assert!(qu[v].abs() <= 1e-12, "{:e}", qu[v]);
            }
        }
        let dn = dn_schur(&net, &sigma).unwrap();
        let e1 = f.dot(&(&dn * &f));
        let e2 = u.dot(&qu);
        assert!((e1 - e2).abs() <= 1e-10 * e1.abs().max(1.0));
    }
}

#[test]
fn neumann_minus_dirichlet_small() {
    // interior a, boundary b, edge weight 1, masses 1: Q_N = [[2,−1],[−1,2]]
    let net = GaussianNetwork::path(2, 1.0).unwrap();
    let rep = cn_minus_cd_check(&net, &[0], &[1], Closure::Subgraph).unwrap();
    let cn = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]) / 3.0;
    let cd = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.0]);
    assert!(max_abs(&(&rep.c_n - &cn)) < 1e-15);
    assert!(max_abs(&(&rep.c_d - &cd)) < 1e-15);
    // DN = 2 − 1/2, PI = (1/2, 1): PI·DN⁻¹·PIᵀ = [[1/6, 1/3], [1/3, 2/3]]
    assert!(rep.residual < 1e-15);
    let diff = cn - cd;
    assert!((diff[(0, 0)] - 1.0 / 6.0).abs() < 1e-15);
    assert!((diff[(1, 1)] - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn neumann_minus_dirichlet_random() {
    let mut r = rng(3);
    // trees with leaf boundary
    for _ in 0..20 {
        let n = r.random_range(5..40);
        let net = GaussianNetwork::random_connected(n, 0.0, 0.9, &mut r).unwrap();
        let leaves: Vec<usize> = (0..n)
            .filter(|&v| (0..n).filter(|&u| u != v && net.q[(u, v)] != 0.0).count() == 1)
            .collect();
        let omega: Vec<usize> = (0..n).filter(|v| !leaves.contains(v)).collect();
        if omega.is_empty() {
            continue;
        }
        let rep = cn_minus_cd_check(&net, &omega, &leaves, Closure::Subgraph).unwrap();
        assert!(rep.residual <= 1e-12, "{:e}", rep.residual);
    }
    for _ in 0..100 {
        let net = random_net(&mut r);
        let n = net.len();
        let k = r.random_range(1..=n / 2);
        let omega = random_subset(&mut r, n, k);
        let bd = vertex_boundary(&net.q, &omega);
        if bd.is_empty() {
            continue;
        }
        let rep = cn_minus_cd_check(&net, &omega, &bd, Closure::Subgraph).unwrap();
        assert!(rep.residual <= 1e-12 * max_abs(&rep.c_n).max(1.0), "{:e}", rep.residual);
        assert!(rep.min_eig >= -1e-12);
    }
}

#[test]
fn neumann_closure_errors() {
    let net = GaussianNetwork::path(4, 1.0).unwrap();
    // vertex 1 has an edge to 2, outside Ω ∪ ∂Ω
    assert!(matches!(
        cn_minus_cd_check(&net, &[0, 1], &[3], Closure::Subgraph),
        Err(GaussError::Precondition(_))
    ));
}

#[test]
fn mirror_closure_is_even_sector() {
    for net in [mirror_path(4, 0.7), mirror_grid(5, 2, 1.1)] {
        let r = net.reflection.clone().unwrap();
        let rep = cn_minus_cd_check(&net, &r.plus, &r.sigma, Closure::MirrorHalf).unwrap();
        assert!(rep.mirror_residual.unwrap() < 1e-13);
        assert!(rep.residual < 1e-13);
        assert!(rep.min_eig >= -1e-12);
    }
}
