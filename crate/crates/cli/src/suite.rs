use nalgebra::{DMatrix, DVector};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use fieldlab_anomaly as anomaly;
use fieldlab_covers as covers;
use fieldlab_gaussnet as gff;
use fieldlab_numerics::periodic_trapezoid;
use fieldlab_rpwitness as rp;
use fieldlab_spectra as spectra;
use fieldlab_transfer as transfer;
use fieldlab_zeta as zeta;

use crate::error::Result;
use crate::experiments::{
    certificate_checks, circle_spectrum, circulant_log_z, cover_block_distance, mcmc_report,
    random_net, random_subset, select,
};
use crate::report::{ExperimentReport, ReportBuilder};

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    run: fn(u64) -> Result<ExperimentReport>,
}

impl Criterion {
    pub fn run(&self, seed: u64) -> Result<ExperimentReport> {
        (self.run)(seed)
    }
}

pub const DEFAULT_SEED: u64 = 20240601;

pub fn criteria() -> &'static [Criterion] {
    const C: &[Criterion] = &[
        Criterion { id: 1, name: "gaussian chain exactness", run: c01_gaussian_chain },
        Criterion { id: 2, name: "perron-frobenius and mixing", run: c02_perron_frobenius },
        Criterion { id: 3, name: "quartic mcmc cross-validation", run: c03_quartic_mcmc },
        Criterion { id: 4, name: "zeta closed forms", run: c04_zeta_closed_forms },
        Criterion { id: 5, name: "cover spectral decomposition", run: c05_cover_spectra },
        Criterion { id: 6, name: "cover free energy", run: c06_cover_free_energy },
        Criterion { id: 7, name: "heat traces and eigencounts", run: c07_heat_traces },
        Criterion { id: 8, name: "gluing on the flat torus", run: c08_bfk },
        Criterion { id: 9, name: "anomaly suite", run: c09_anomaly },
        Criterion { id: 10, name: "weights and entropy", run: c10_weights },
        Criterion { id: 11, name: "rp witnesses", run: c11_rp_witnesses },
        Criterion { id: 12, name: "gaussian network identities", run: c12_gaussian_networks },
        Criterion { id: 13, name: "wick calculus", run: c13_wick },
    ];
    C
}

pub fn criterion(id: u8) -> Option<&'static Criterion> {
    criteria().iter().find(|c| c.id == id)
}

fn builder(id: u8, seed: Option<u64>) -> ReportBuilder {
    ReportBuilder::new(format!("criterion-{id:02}"), seed)
}

/// One line per criterion: `[PASS] 01 name  worst=… (ms)`.
pub fn summary_line(c: &Criterion, r: &Result<ExperimentReport>) -> String {
    match r {
        Ok(rep) => format!(
            "[{}] {:02} {:<32} worst residual/tol = {:.3e}  ({} ms)",
            if rep.pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            rep.worst_ratio(),
            rep.runtime_ms
        ),
        Err(e) => format!("[FAIL] {:02} {:<32} error: {e}", c.id, c.name),
    }
}

fn c01_gaussian_chain(_seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(1, None);
    let m = 1.0;
    let model = transfer::build_transfer(&transfer::EvenPoly::mass(m), 200, 8.0)?;
    b.input("grid", 200).input("halfwidth", 8.0).input("mass", m);
    let mut rows = Vec::new();
    for n in [8usize, 32, 64] {
        let got = transfer::log_partition_function(&model, n)?;
        let want = circulant_log_z(n, m);
        rows.push((n, got, want));
        b.check("trace_relative_error", (got - want).exp_m1(), 1e-8);
    }
    b.output("log_z", rows);
    let rule = periodic_trapezoid(256, 1.0)?;
    let integral = rule.integrate(|x| (2.0 - 2.0 * (2.0 * PI * x).cos() + m * m).ln());
    let want = 0.5 * PI.ln() - 0.5 * integral;
    let ns = [2usize, 4, 8, 16, 32];
    let fe = transfer::free_energy_density(&model, &ns)?;
    b.output("densities", &fe.densities).output("limit", fe.limit).output("oracle_limit", want);
    b.check("density_limit", fe.limit - want, 1e-6);
    b.check("density_at_32", fe.densities[ns.len() - 1] - want, 1e-6);
    Ok(b.finish())
}

fn c02_perron_frobenius(seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(2, Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pots: [&[f64]; 3] = [&[0.0, 1.0], &[0.0, 0.0, 1.0], &[0.0, -1.0, 1.0]];
    let mut alphas = Vec::new();
    for c in pots {
        let p = transfer::EvenPoly::new(c.to_vec())?;
        let coarse = transfer::build_transfer(&p, 200, 5.0)?;
        let top = transfer::top_eigenpair(&coarse)?;
        let min = top.omega0.iter().copied().fold(f64::INFINITY, f64::min);
        b.require("eigenvector_positive", min > 0.0);
        b.require("alpha_below_one", top.alpha < 1.0);
        alphas.push((c.to_vec(), top.alpha, min));
        let model = transfer::build_transfer(&p, 200, 8.0)?;
        let n = model.size();
        for _ in 0..20 {
            let f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let g: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let slack = transfer::mixing_check(&model, &f, &g, 50)?;
            b.check("mixing_slack", slack.max(0.0), 1e-10);
        }
    }
    b.output("alpha_and_min_entry", alphas);
    Ok(b.finish())
}

fn c03_quartic_mcmc(seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(3, Some(seed));
    let (n, sweeps, nodes) = (32, 1_000_000, 8);
    b.input("n", n).input("sweeps_per_node", sweeps).input("nodes", nodes);
    mcmc_report(&mut b, &transfer::EvenPoly::quartic(), n, sweeps, nodes, 200, 8.0, seed)
}

fn c04_zeta_closed_forms(_seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(4, None);
    let two_pi = 2.0 * PI;
    let mut rows = Vec::new();
    let mut case = |b: &mut ReportBuilder, l: f64, m: f64, th: f64, want: f64| -> Result<()> {
        let d = zeta::det_zeta(&circle_spectrum(l, m, th, 16)?)?;
        b.check("relative_error", (d.value - want) / want, 1e-8);
        rows.push((l, m, th, d.value, want));
        Ok(())
    };
    case(&mut b, two_pi, 1.0, 0.0, 4.0 * PI.sinh().powi(2))?;
    for l in [0.5, 1.0, two_pi, 10.0] {
        case(&mut b, l, 0.0, 0.0, l * l)?;
    }
    for th in [PI / 3.0, PI / 2.0, PI] {
        for (l, m) in [(two_pi, 1.0), (1.0, 0.5), (3.0, 0.0)] {
            case(&mut b, l, m, th, 2.0 * (m * l).cosh() - 2.0 * th.cos())?;
        }
    }
    b.output("cases", rows);
    Ok(b.finish())
}

/// Connected base on n vertices: a spanning path plus random chords, with
/// random cocycle weights in [−2, 2].
fn random_base(rng: &mut ChaCha8Rng, n: usize, degree: usize) -> spectra::CoverGraph {
    let mut edges: Vec<(usize, usize, i64)> =
        (1..n).map(|i| (i - 1, i, rng.random_range(-2..=2))).collect();
    for u in 0..n {
        for v in u + 2..n {
            if rng.random_bool(0.35) {
                edges.push((u, v, rng.random_range(-2..=2)));
            }
        }
    }
    spectra::CoverGraph { n_vertices: n, edges, degree }
}

fn c05_cover_spectra(seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(5, Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = [
        spectra::CoverGraph::cycle(3, 1),
        random_base(&mut rng, 4, 1),
        random_base(&mut rng, 5, 1),
    ];
    for g in &bases {
        for n in 1..=12 {
            let g = spectra::CoverGraph { degree: n, ..g.clone() };
            b.check("multiset_distance", cover_block_distance(&g)?, 1e-10);
        }
    }
    b.output("bases", &bases);
    let ns = [2usize, 3, 4, 6, 8, 12];
    for (l, m) in [(1.0, 0.0), (2.5, 0.0), (1.0, 1.0)] {
        let seq = covers::free_energy_sequence(&covers::CoverGeometry::Circle { length: l }, m, &ns)?;
        b.check("circle_product_identity", seq.max_route_gap, 1e-8);
    }
    Ok(b.finish())
}

fn c06_cover_free_energy(_seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(6, None);
    let circle = |l| covers::CoverGeometry::Circle { length: l };
    let s0 = covers::free_energy_sequence(&circle(1.5), 0.0, &[2, 4, 8, 16, 32, 64])?;
    b.check("massless_limit", s0.limit_estimate.value, 1e-6);
    let s1 = covers::free_energy_sequence(&circle(1.0), 1.0, &[2, 4, 8, 16, 32])?;
    // m·L over the base volume L
    b.check("massive_limit", s1.limit_estimate.value - 1.0, 1e-8);
    let (l1, l2) = (1.0, 1.0);
    let st = covers::free_energy_sequence(
        &covers::CoverGeometry::TorusStrip { l1, l2 },
        0.0,
        &[2, 3, 4, 6, 8, 12, 16],
    )?;
    b.check("torus_route_gap", st.max_route_gap, 1e-6);
    b.require("torus_converged", st.limit_estimate.converged);
    b.output("massless_limit", &s0.limit_estimate)
        .output("massive_limit", &s1.limit_estimate)
        .output("torus_limit", &st.limit_estimate)
        .output("strip_casimir", -PI / (3.0 * l2 * l2));
    Ok(b.finish())
}

fn symmetric_theta_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=120).map(|i| -PI + PI * i as f64 / 60.0).collect();
    for k in 1..=10 {
        let t = 0.025 * k as f64;
        g.push(t);
        g.push(-t);
    }
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    g
}

fn c07_heat_traces(_seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(7, None);
    let ts: Vec<f64> = (0..=16).map(|i| 0.05 * 10f64.powf(i as f64 * 3.30103 / 16.0)).collect();
    for l in [1.0, 2.0 * PI] {
        for n in 1..=64 {
            for &t in &ts {
                b.check("deck_identity", covers::heat_trace_cover(l, n, t)?.difference(), 1e-10);
            }
        }
    }
    let grid = symmetric_theta_grid();
    let circle = covers::CircleFamily { length: 2.0 * PI };
    let curve = covers::lambda0_analysis(&circle, &grid)?;
    let heat_t: Vec<f64> = (0..=20).map(|i| 10f64.powf(i as f64 / 10.0)).collect();
    let ns: Vec<usize> = (1..=64).collect();
    let r1 = covers::small_eigen_heat_bound(&circle, &curve, None, &heat_t, &ns)?;
    let graph = covers::GraphFamily { graph: spectra::CoverGraph::cycle(3, 1) };
    let gcurve = covers::lambda0_analysis(&graph, &grid)?;
    let gt: Vec<f64> = (0..=10).map(|i| 1.0 + 4.9 * i as f64).collect();
    let r2 = covers::small_eigen_heat_bound(&graph, &gcurve, None, &gt, &[1, 2, 3, 4, 6, 8, 12, 16, 24])?;
    for r in [&r1, &r2] {
        b.check("heat_bound_violations", r.violations as f64, 0.0);
    }
    b.output("heat_bound_circle", &r1).output("heat_bound_graph", &r2);

    let lams = [1.0, 4.0, 16.0, 64.0];
    let bound1 = covers::flat_weyl_constant(1, 2.0 * PI)?;
    let bound2 = covers::flat_weyl_constant(2, 2.0 * PI)?;
    let mut ratios = Vec::new();
    for n in [1usize, 2, 4, 8, 16] {
        let big = 2.0 * PI * n as f64;
        let sp = spectra::twisted_circle_spectrum(
            &spectra::TwistedCircle { length: big, mass: 0.0, theta: 0.0 },
            12 * n,
        )?;
        let e = covers::eigencount_check(&sp, big, 1, &lams)?;
        b.check("weyl_excess_dim1", (e.max_ratio - bound1).max(0.0), 0.0);
        ratios.push((1, n, e.max_ratio, bound1));
    }
    for n in [1usize, 2, 3, 4] {
        let (l1, l2) = (2.0 * PI * n as f64, 2.0 * PI);
        let sp = spectra::torus_spectrum(l1, l2, 0.0, 12 * n)?;
        let e = covers::eigencount_check(&sp, l1 * l2, 2, &lams)?;
        b.check("weyl_excess_dim2", (e.max_ratio - bound2).max(0.0), 0.0);
        ratios.push((2, n, e.max_ratio, bound2));
    }
    b.output("eigencount_ratios", ratios);
    Ok(b.finish())
}

fn c08_bfk(_seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(8, None);
    let r = zeta::bfk_torus_check(2.0 * PI, 2.0 * PI, 1.0, 1024)?;
    b.output("report", &r).output("constant_offset", r.constant_offset);
    b.check("residual", r.residual, 1e-5);
    Ok(b.finish())
}

fn c09_anomaly(_seed: u64) -> Result<ExperimentReport> {
    use anomaly::{Poly3, SphereFn};
    let mut b = builder(9, None);
    let q = anomaly::SphereQuad::default();
    let zero = SphereFn::zero();

    let s1 = SphereFn::from_poly(Poly3::linear([0.3, -0.2, 0.1]).plus(&Poly3::monomial([1, 1, 0], 0.4)));
    let s2 = SphereFn::from_poly(Poly3::monomial([0, 0, 3], -0.5).plus(&Poly3::constant(0.2)))
        .with_log_poly(0.3, Poly3::constant(2.0).plus(&Poly3::linear([1.0, 0.0, 0.0])));
    let total = anomaly::anomaly_smooth(&s1.plus(&s2), &zero, &q)?.value;
    let a = anomaly::anomaly_smooth(&s2, &s1, &q)?.value;
    let c = anomaly::anomaly_smooth(&s1, &zero, &q)?.value;
    b.check("smooth_cocycle", total - a - c, 1e-8);

    for k in [-1.0, 0.3, 2.0] {
        let v = anomaly::anomaly_smooth(&SphereFn::constant(k), &zero, &q)?.value;
        b.check("constant_factor", v - k / 3.0, 1e-8);
    }

    let z2 = anomaly::ConicalSurfaceData::power_pullback(2)?;
    let u = SphereFn::from_poly(Poly3::linear([0.2, -0.1, 0.0]).plus(&Poly3::monomial([0, 0, 2], 0.15)));
    let ladder = anomaly::EpsLadder::default();
    let ra0 = anomaly::anomaly_renormalized(&z2, &zero, &ladder, &q)?.value;
    let ra1 = anomaly::anomaly_renormalized(&z2, &u, &ladder, &q)?.value;
    let su = anomaly::anomaly_smooth(&u, &zero, &q)?.value;
    b.check("reference_independence", ra0 - ra1 - su, 1e-4);

    let hs = [
        SphereFn::from_poly(
            Poly3::linear([0.3, 0.0, 0.1]).plus(&Poly3::monomial([0, 1, 1], 0.2)).plus(&Poly3::constant(0.2)),
        ),
        SphereFn::from_poly(Poly3::monomial([2, 0, 0], 0.25).plus(&Poly3::linear([0.0, -0.2, 0.15]))),
    ];
    let fitted = anomaly::EpsLadder::fitted(&z2)?;
    let mut scaling = Vec::new();
    for h in &hs {
        let r = anomaly::conical_scaling_check(&z2, h, &zero, &fitted, &q)?;
        b.check("conical_scaling", r.residual, 1e-4);
        scaling.push(r);
    }
    let slope = anomaly::counterterm_slope(&z2, &zero, &ladder, &q)?;
    b.check("counterterm_slope_relative", slope.rel_err, 0.02);
    b.output("renormalized_z2", ra0)
        .output("scaling", scaling)
        .output("slope", slope.slope)
        .output("predicted_slope", slope.predicted);
    Ok(b.finish())
}

fn c10_weights(_seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(10, None);
    let r = Rational64::new;
    let mismatches = |ok: bool| if ok { 0.0 } else { 1.0 };
    let mut rows = Vec::new();
    for c in [r(1, 1), r(1, 2), r(7, 10), r(26, 1)] {
        for d in 2..=9u32 {
            let di = d as i64;
            // (c/12)(d − 1/d) = c(d² − 1)/(12d)
            let want = c * r(di * di - 1, 12 * di);
            let w = anomaly::branched_weights(&anomaly::BranchData::power(d)?, c);
            b.check("weight_mismatch", mismatches(!w.is_empty() && w.iter().all(|x| *x == want)), 0.0);
            let e = anomaly::renyi_exponent(d, c)?;
            b.check("exponent_mismatch", mismatches(e == -want * 2), 0.0);
            rows.push((d, format!("{c}"), format!("{want}"), format!("{e}")));
        }
        // d → 1 through the continuous cone angle γ = d − 1
        let limit: Vec<Rational64> = (1..=6)
            .map(|k| anomaly::conical_weight(r(1, 10i64.pow(k)), c))
            .collect::<std::result::Result<_, _>>()?;
        let decreasing = limit.windows(2).all(|w| w[1] < w[0]);
        b.check("limit_not_decreasing", mismatches(decreasing), 0.0);
        b.check("limit_at_one", mismatches(anomaly::conical_weight(r(0, 1), c)? == r(0, 1)), 0.0);
        let tail = *limit.last().expect("nonempty");
        b.check("limit_tail", *tail.numer() as f64 / *tail.denom() as f64, 1e-5);
    }
    b.output("weights", rows);
    Ok(b.finish())
}

fn c11_rp_witnesses(_seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(11, None);
    let sub = |b: &mut ReportBuilder, key: &str, c: &rp::WitnessCertificate| -> Result<()> {
        let mut inner = ReportBuilder::new(key, None);
        certificate_checks(&mut inner, c)?;
        let r = inner.finish();
        for (k, v) in &r.residuals {
            b.check(k, *v, r.tolerances[k]);
        }
        b.output(key, (c.pairing_value, c.uncut_pairing, c.error_estimate));
        Ok(())
    };
    let line = rp::line_witness(1.0, 40)?;
    sub(&mut b, "line_kappa_1", &line)?;
    for lam in [1.0, 4.0, 16.0] {
        let c = rp::compact_witness(&rp::CompactParams::circle(lam))?;
        sub(&mut b, &format!("compact_lambda_{lam}"), &c)?;
        // on the unit-radius circle the modes are k², so λ* = ⌊√Λ⌋²
        let lstar = (lam.sqrt() + 1e-12).floor().powi(2);
        b.check("compact_closed_form", c.pairing_value + 1.0 / (lstar + 1.0), 1e-8);
    }
    for lam in [1.0, 10.0, 100.0] {
        let c = rp::cylinder_witness(lam, 2.0 * PI, 40)?;
        sub(&mut b, &format!("cylinder_lambda_{lam}"), &c)?;
    }
    let ball = rp::fourier_ball_witness(&rp::BallParams::new(4.0, 8))?;
    sub(&mut b, "ball_lambda_4", &ball)?;
    Ok(b.finish())
}

fn vertex_boundary(q: &DMatrix<f64>, omega: &[usize]) -> Vec<usize> {
    (0..q.nrows())
        .filter(|v| !omega.contains(v) && omega.iter().any(|&w| q[(w, *v)] != 0.0))
        .collect()
}

fn c12_gaussian_networks(seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(12, Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut markov_checked, mut cn_checked) = (0usize, 0usize);
    for _ in 0..100 {
        let net = random_net(&mut rng, 60)?;
        let n = net.len();
        let c = gff::covariance(&net)?;
        let scale = c.amax().max(1.0);

        let k = rng.random_range(1..n);
        let sigma = random_subset(&mut rng, n, k);
        let dn = gff::dn_schur(&net, &sigma)?;
        let inv = dn.clone().try_inverse().expect("DN is positive definite");
        b.check("schur_duality", (inv - select(&c, &sigma, &sigma)).amax() / scale, 1e-12);

        let f = DVector::from_fn(k, |_, _| rng.random_range(-1.0..1.0));
        let u = gff::poisson_extend(&net, &sigma, &f)?;
        let qu = &net.q * &u;
        let e1 = f.dot(&(&dn * &f));
        b.check("poisson_energy", (e1 - u.dot(&qu)) / e1.abs().max(1.0), 1e-10);
        let harmonic = (0..n).filter(|v| !sigma.contains(v)).map(|v| qu[v].abs()).fold(0.0, f64::max);
        b.check("poisson_harmonic", harmonic, 1e-10);

        let k_omega = rng.random_range(1..=n / 2);
        let omega = random_subset(&mut rng, n, k_omega);
        let bd = vertex_boundary(&net.q, &omega);
        if !bd.is_empty() {
            let r = gff::cn_minus_cd_check(&net, &omega, &bd, gff::Closure::Subgraph)?;
            let s = r.c_n.amax().max(1.0);
            b.check("cn_minus_cd", r.residual / s, 1e-12);
            b.check("cn_dominates_cd", (-r.min_eig).max(0.0), 1e-12);
            cn_checked += 1;
            match gff::markov_bayes_check(&net, &bd, &[]) {
                Ok(m) => {
                    b.check("markov_cross_covariance", m.cross_covariance, 1e-12);
                    b.check("markov_decomposition", m.decomposition_residual, 1e-12);
                    markov_checked += 1;
                }
                Err(gff::GaussError::Precondition(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }

        let (n1, n2) = (rng.random_range(4..=30), rng.random_range(4..=30));
        let kk = rng.random_range(1..3);
        let a = gff::GaussianNetwork::random_connected(n1, 0.15, rng.random_range(0.3..1.2), &mut rng)?;
        let bb = gff::GaussianNetwork::random_connected(n2, 0.15, rng.random_range(0.3..1.2), &mut rng)?;
        let s1 = random_subset(&mut rng, n1, kk + 1);
        let s2 = random_subset(&mut rng, n2, kk + 1);
        let p1 = gff::Piece { net: a, inn: vec![s1[kk]], out: s1[..kk].to_vec() };
        let p2 = gff::Piece { net: bb, inn: s2[..kk].to_vec(), out: vec![s2[kk]] };
        let rep = gff::amplitude_compose(&p1, Some(&p2))?;
        b.check("amplitude_precision", rep.precision_residual, 1e-10);
        b.check("amplitude_log_norm", rep.log_norm_residual, 1e-10);
    }
    b.output("graphs", 100)
        .output("cn_cd_checked", cn_checked)
        .output("markov_checked", markov_checked);
    b.require("markov_exercised", markov_checked > 0);
    Ok(b.finish())
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

fn c13_wick(seed: u64) -> Result<ExperimentReport> {
    let mut b = builder(13, Some(seed));
    let f = |var, power, ordered| gff::WickFactor { var, power, ordered };
    for n in 0..=12u32 {
        for m in 0..=12 - n {
            let p = gff::pairing_polynomial(&[f(0, n, true), f(1, m, true)])?;
            let ok = if n != m {
                p.terms.is_empty()
            } else if n == 0 {
                p.terms == vec![(1, vec![])]
            } else {
                p.terms == vec![(factorial(n), vec![((0, 1), n)])]
            };
            b.check("orthogonality_mismatch", if ok { 0.0 } else { 1.0 }, 0.0);
        }
    }
    let rho = 0.6;
    let c = DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]);
    let (mean, se) = gff::wick_monte_carlo(&c, &[f(0, 3, true), f(1, 3, true)], 1_000_000, seed)?;
    let want = 6.0 * rho * rho * rho;
    b.check("monte_carlo_cubic", mean - want, 3.0 * se);
    let net = gff::GaussianNetwork::cycle(8, 1.0)?;
    let a = 0.05;
    let q = gff::wick_interaction(&net, &[0.0, 0.0, a], 1_000_000, seed.wrapping_add(1))?;
    let exact = gff::wick_quadratic_exact(&net, a)?;
    b.check("quadratic_exponential", q.mean_exp - exact, 3.0 * q.se_exp);
    b.require("quadratic_not_divergent", !q.divergent);
    b.output("cubic", (mean, se, want)).output("quadratic", (q.mean_exp, q.se_exp, exact));
    Ok(b.finish())
}
