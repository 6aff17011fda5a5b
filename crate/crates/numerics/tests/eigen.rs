use fieldlab_numerics::{herm_eig, sym_eig, Complex64, NumericsError};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn cycle_laplacians_against_fourier() {
    for n in [3usize, 4, 7, 16, 33] {
        let l = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if (i + 1) % n == j || (j + 1) % n == i {
                -1.0
            } else {
                0.0
            }
        });
        let got = sym_eig(&l).unwrap().values;
        let want = sorted((0..n).map(|k| 2.0 - 2.0 * (2.0 * PI * k as f64 / n as f64).cos()).collect());
        assert!(got.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-12), "n={n}");
    }
}

#[test]
fn hermitian_matches_real_embedding() {
    // H = A + iB has the spectrum of [[A, −B], [B, A]] with every value doubled
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [2usize, 5, 12] {
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        let big = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let z = h[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let e = herm_eig(&h).unwrap().values;
        let doubled = sorted(e.iter().flat_map(|&x| [x, x]).collect());
        let r = sym_eig(&big).unwrap().values;
        assert!(doubled.iter().zip(&r).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

#[test]
fn residuals_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 60;
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let s = &a + a.transpose();
    let e = sym_eig(&s).unwrap();
    let norm = s.norm();
    for (k, &lam) in e.values.iter().enumerate() {
        let v = e.vectors.column(k);
        assert!((&s * v - v * lam).norm() <= 1e-10 * norm);
    }
    assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn contract_errors() {
    let mut m = DMatrix::<f64>::identity(3, 3);
    m[(0, 1)] = 1.0;
    assert!(matches!(sym_eig(&m), Err(NumericsError::Asymmetric(_))));
    m[(1, 0)] = 1.0;
    m[(2, 2)] = f64::NAN;
    assert!(matches!(sym_eig(&m), Err(NumericsError::NonFinite)));
}
