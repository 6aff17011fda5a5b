use fieldlab_numerics::{Spectrum, TailLaw};
use fieldlab_spectra::*;
use fieldlab_zeta::det::log_det_mellin;
use fieldlab_zeta::*;
use num_complex::Complex64;
use std::f64::consts::PI;

fn circle(l: f64, m: f64, theta: f64) -> Spectrum {
    twisted_circle_spectrum(
        &TwistedCircle {
            length: l,
            mass: m,
            theta,
        },
        16,
    )
    .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn massive_circle_sinh() {
    for &(l, m) in &[(2.0 * PI, 1.0), (1.0, 0.3), (3.0, 2.0)] {
        let d = det_zeta(&circle(l, m, 0.0)).unwrap();
        let want = 4.0 * (m * l / 2.0).sinh().powi(2);
        assert!(rel(d.value, want) < 1e-8, "L={l} m={m}: {} vs {want}", d.value);
        assert!(d.value > 0.0);
    }
}

#[test]
fn massive_circle_by_mellin() {
    let sp = circle(2.0 * PI, 1.0, 0.0);
    let d = log_det_mellin(&sp).unwrap();
    let want = (4.0 * PI.sinh().powi(2)).ln();
    assert!((d.log_det - want).abs() < 1e-9, "{} vs {want}", d.log_det);
}

#[test]
fn massless_circle_primed_is_length_squared() {
    for &l in &[0.5, 1.0, 2.0 * PI, 10.0] {
        let d = det_zeta(&circle(l, 0.0, 0.0)).unwrap();
        assert_eq!(d.kernel_dim, 1);
        assert!(rel(d.value, l * l) < 1e-8, "L={l}: {}", d.value);
        let dm = log_det_mellin(&circle(l, 0.0, 0.0)).unwrap();
        assert!((dm.log_det - 2.0 * l.ln()).abs() < 1e-9);
    }
}

#[test]
fn twisted_circle_cosh_cos() {
    for &th in &[PI / 3.0, PI / 2.0, PI, 2.0] {
        for &(l, m) in &[(2.0 * PI, 0.0), (2.0 * PI, 1.0), (1.3, 0.4)] {
            let d = det_zeta(&circle(l, m, th)).unwrap();
            let want = 2.0 * (m * l).cosh() - 2.0 * th.cos();
            assert!(rel(d.value, want) < 1e-8, "θ={th} L={l} m={m}");
        }
    }
}

#[test]
fn circle_scaling_law() {
    let a = det_zeta(&circle(1.7, 0.0, 0.0)).unwrap().value;
    let b = det_zeta(&circle(3.0 * 1.7, 0.0, 0.0)).unwrap().value;
    assert!(rel(b / a, 9.0) < 1e-10);
}

#[test]
fn zeta_special_values() {
    let sp = circle(2.0 * PI, 0.0, 0.0);
    let z = zeta_of_spectrum(&sp, Complex64::new(2.0, 0.0)).unwrap();
    assert!((z.value.re - PI.powi(4) / 45.0).abs() < 1e-10);
    let fin = Spectrum::finite(vec![1.0, 2.0]).unwrap();
    let z = zeta_of_spectrum(&fin, Complex64::new(1.0, 0.0)).unwrap();
    assert!((z.value.re - 1.5).abs() < 1e-15);
    let one = Spectrum::finite(vec![3.7]).unwrap();
    let z = zeta_of_spectrum(&one, Complex64::new(0.0, 0.0)).unwrap();
    assert_eq!(z.value.re, 1.0);
}

#[test]
fn methods_agree_for_large_real_part() {
    let cases = vec![
        circle(2.0 * PI, 0.0, 0.0),
        circle(1.0, 0.5, 1.0),
        torus_spectrum(2.0 * PI, 3.0, 0.5, 40).unwrap(),
        torus_spectrum(1.0, 1.0, 0.0, 40).unwrap(),
        interval_dirichlet_spectrum(2.0, 0.3, 200).unwrap(),
        dirichlet_cylinder_spectrum(1.0, 2.0, 1.0, 40).unwrap(),
    ];
    for sp in &cases {
        for &s in &[2.0, 2.5, 3.0] {
            let s = Complex64::new(s, 0.3);
            let a = zeta_with(sp, s, ZetaMethod::DirectSum).unwrap();
            let b = zeta_with(sp, s, ZetaMethod::MellinSplit).unwrap();
            let tol = a.error_estimate + b.error_estimate + 1e-12;
            assert!((a.value - b.value).norm() <= tol, "{:?} vs {:?}", a, b);
            if sp.truncation.tail.dimension() == 1 {
                let c = zeta_with(sp, s, ZetaMethod::ClosedForm).unwrap();
                assert!((c.value - b.value).norm() <= 1e-10 * c.value.norm());
            }
        }
    }
}

#[test]
fn mellin_zeta_at_zero_matches_closed() {
    let sp = circle(2.0, 0.7, 0.9);
    let lmin = sp.positive().next().unwrap();
    let (v, _) = mellin_zeta(&sp.truncation.tail, lmin, Complex64::new(0.0, 0.0)).unwrap();
    let c = ladder_zeta(
        match &sp.truncation.tail {
            TailLaw::Separable { factors, .. } => &factors[0],
            _ => unreachable!(),
        },
        0.49,
        Complex64::new(0.0, 0.0),
    )
    .unwrap();
    assert!((v - c).norm() < 1e-9);
}

#[test]
fn fredholm_basics() {
    assert_eq!(det_fredholm(&[]).unwrap(), 1.0);
    assert_eq!(det_fredholm(&[0.0, 0.0]).unwrap(), 1.0);
    assert_eq!(det_fredholm(&[1.0, 1.0]).unwrap(), 4.0);
    assert!(det_fredholm(&[f64::INFINITY]).is_err());
}

#[test]
fn fredholm_matches_dense_determinant() {
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let b = DMatrix::<f64>::from_fn(5, 5, |_, _| rng.random_range(-0.5..0.5));
        let a = &b + b.transpose();
        let eig = fieldlab_numerics::sym_eig(&a).unwrap().values;
        let dense = (DMatrix::identity(5, 5) + &a).determinant();
        assert!((det_fredholm(&eig).unwrap() - dense).abs() < 1e-12 * dense.abs().max(1.0));
        let tr: f64 = eig.iter().map(|x| x.abs()).sum();
        assert!(det_fredholm(&eig).unwrap().abs() <= tr.exp());
    }
}

#[test]
fn factorization_cases() {
    let a = TwistedCircle {
        length: 2.0 * PI,
        mass: 0.0,
        theta: 0.0,
    };
    let r = factorization_check(&a, &DiagonalPerturbation::Zero, 10).unwrap();
    assert_eq!(r.residual, 0.0);
    let r = factorization_check(&a, &DiagonalPerturbation::MassShift { mass: 1.0 }, 50).unwrap();
    assert!(r.residual <= 1e-8, "{r:?}");
    let tw = TwistedCircle {
        theta: PI / 3.0,
        ..a
    };
    let r = factorization_check(&tw, &DiagonalPerturbation::TwistChange { theta_to: 2.0 }, 50)
        .unwrap();
    assert!(r.residual <= 1e-6, "{r:?}");
}

#[test]
fn bfk_torus() {
    let r = bfk_torus_check(2.0 * PI, 2.0 * PI, 1.0, 1024).unwrap();
    println!("{r:#?}");
    assert!(r.residual <= 1e-5);
    assert!(r.mode_sum_residual <= 1e-10);
    assert!((r.mode_sum_torus - r.log_det_torus).abs() < 1e-8);
    assert!((r.mode_sum_dirichlet - r.log_det_dirichlet).abs() < 1e-8);
    assert!(bfk_torus_check(1.0, 1.0, 0.0, 1024).is_err());
}

#[test]
fn dn_scalar_from_boundary_value_problem() {
    // −u'' + μ²u = 0 on [0, L1], u(0) = u(L1) = 1, second-order differences
    let (mu, l1) = (1.0, 2.0);
    let fd = |n: usize| -> f64 {
        let h = l1 / n as f64;
        let m = n - 1;
        let mut diag = vec![2.0 + mu * mu * h * h; m];
        let mut rhs = vec![0.0; m];
        rhs[0] = 1.0;
        rhs[m - 1] += 1.0;
        // Thomas algorithm with off-diagonals −1
        for i in 1..m {
            let w = -1.0 / diag[i - 1];
            diag[i] += w;
            rhs[i] -= w * rhs[i - 1];
        }
        let mut u = vec![0.0; m];
        u[m - 1] = rhs[m - 1] / diag[m - 1];
        for i in (0..m - 1).rev() {
            u[i] = (rhs[i] + u[i + 1]) / diag[i];
        }
        // one-sided second-order derivatives at both ends
        let d0 = (-3.0 + 4.0 * u[0] - u[1]) / (2.0 * h);
        let d1 = (3.0 - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * h);
        -d0 + d1
    };
    let (a, b) = (fd(4000), fd(8000));
    let extrap = (4.0 * b - a) / 3.0;
    assert!((extrap - dn_mode_scalar(mu, l1)).abs() < 1e-7);
    assert!((dn_mode_scalar(1.0, 2.0) - 2.0 * 1f64.tanh()).abs() < 1e-15);
}

#[test]
fn dn_minus_square_root_is_summable() {
    let (l1, l2, m) = (2.0 * PI, 2.0 * PI, 1.0);
    let mut s = 0.0;
    let mut last = 0.0;
    for n in 0..200i64 {
        let mu = ((2.0 * PI * n as f64 / l2).powi(2) + m * m).sqrt();
        let d = dn_mode_scalar(mu, l1) - 2.0 * mu;
        assert!((d - 2.0 * mu * ((mu * l1 / 2.0).tanh() - 1.0)).abs() < 1e-12);
        s += d.abs();
        last = d.abs();
    }
    assert!(s.is_finite() && last < 1e-100);
}
