use fieldlab_transfer::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn potentials() -> Vec<EvenPoly> {
    vec![
        EvenPoly::mass(1.0),
        EvenPoly::quartic(),
        EvenPoly::new(vec![0.0, -1.0, 1.0]).unwrap(),
    ]
}

#[test]
fn positive_ground_state_and_gap() {
    for p in potentials() {
        // wide enough for the tails, narrow enough that no diagonal entry underflows
        let m = build_transfer(&p, 200, 5.0).unwrap();
        let top = top_eigenpair(&m).unwrap();
        assert!(top.omega0.iter().all(|&v| v > 0.0), "{p:?}");
        assert!(top.alpha < 1.0);
    }
}

#[test]
fn doubled_model_is_degenerate() {
    let m = build_transfer(&EvenPoly::quartic(), 32, 6.0).unwrap();
    let n = m.size();
    let mut big = DMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(&m.t_matrix);
    big.view_mut((n, n), (n, n)).copy_from(&m.t_matrix);
    let doubled = TransferModel::from_matrix(big).unwrap();
    assert!(matches!(
        top_eigenpair(&doubled),
        Err(TransferError::DegenerateGap { .. })
    ));
}

#[test]
fn mixing_bound_random_pairs() {
    for p in potentials() {
        let m = build_transfer(&p, 200, 8.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..20 {
            let f: Vec<f64> = (0..200).map(|_| rng.random_range(-1.0..1.0)).collect();
            let g: Vec<f64> = (0..200).map(|_| rng.random_range(-1.0..1.0)).collect();
            assert!(mixing_check(&m, &f, &g, 50).unwrap() <= 1e-10);
        }
        let om = top_eigenpair(&m).unwrap().omega0;
        // F = G = Ω₀: the connected part vanishes identically
        let s = mixing_check(&m, &om, &om, 50).unwrap();
        assert!(s <= -1.0 + 1e-12 || s <= 1e-12);
    }
}

#[test]
fn orthogonal_component_decays_at_gap_rate() {
    let m = build_transfer(&EvenPoly::quartic(), 120, 8.0).unwrap();
    let top = top_eigenpair(&m).unwrap();
    let om = nalgebra::DVector::from_column_slice(&top.omega0);
    let mut f = nalgebra::DVector::from_fn(120, |i, _| ((i * 7) % 13) as f64 - 6.0);
    f -= &om * f.dot(&om);
    let uhat = &m.t_matrix / top.lambda0;
    let mut u = om.clone();
    let mut v = f.clone();
    for k in 1..30 {
        u = &uhat * u;
        v = &uhat * v;
        assert!(f.dot(&u).abs() < 1e-10);
        assert!(v.norm() <= top.alpha.powi(k) * f.norm() * (1.0 + 1e-9));
    }
}

#[test]
fn grid_refinement_is_cauchy() {
    for p in potentials() {
        let l: Vec<f64> = [100, 200, 400]
            .iter()
            .map(|&n| top_eigenpair(&build_transfer(&p, n, 8.0).unwrap()).unwrap().lambda0)
            .collect();
        let (d1, d2) = ((l[1] - l[0]).abs(), (l[2] - l[1]).abs());
        // differences at round-off level are accepted against a floor
        assert!(d2 <= (0.3 * d1).max(1e-13 * l[2]), "{p:?}: {d1:e} {d2:e}");
    }
}

#[test]
fn gibbs_converges_to_ground_state_form() {
    let m = build_transfer(&EvenPoly::quartic(), 120, 8.0).unwrap();
    let top = top_eigenpair(&m).unwrap();
    let f = m.observable(|s| s * s);
    let inf: f64 = top.omega0.iter().zip(&f).map(|(o, x)| o * o * x).sum();
    let mut prev = f64::INFINITY;
    for n in [2usize, 4, 8, 16] {
        let q = GibbsQuery {
            observables: vec![f.clone()],
            positions: vec![1],
            n,
        };
        let e = (gibbs_expectation(&m, &q).unwrap() - inf).abs();
        assert!(e <= 4.0 * top.alpha.powi(n as i32) * f.iter().fold(0.0f64, |a, b| a.max(b.abs())));
        assert!(e <= prev);
        prev = e;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn kernel_positive_for_admissible_potentials(c0 in -2.0f64..2.0, c2 in -2.0f64..2.0, c4 in 0.05f64..2.0) {
        let p = EvenPoly::new(vec![c0, c2, c4]).unwrap();
        let m = build_transfer(&p, 48, 3.0).unwrap();
        prop_assert!(m.t_matrix.iter().all(|&v| v > 0.0));
        let top = top_eigenpair(&m).unwrap();
        prop_assert!(top.omega0.iter().all(|&v| v > 0.0));
    }
}
