use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use fieldlab_anomaly as anomaly;
use fieldlab_covers as covers;
use fieldlab_gaussnet as gff;
use fieldlab_numerics::{herm_eig, sym_eig};
use fieldlab_rpwitness as rp;
use fieldlab_spectra as spectra;
use fieldlab_transfer as transfer;
use fieldlab_zeta as zeta;

use crate::error::{CliError, Result};
use crate::params::Params;
use crate::report::{ExperimentReport, ReportBuilder};

type Runner = fn(&Params, u64) -> Result<ExperimentReport>;

pub struct Experiment {
    pub module: &'static str,
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [&'static str],
    run: Runner,
}

impl Experiment {
    pub fn id(&self) -> String {
        format!("{}.{}", self.module, self.name)
    }

    pub fn run(&self, p: &Params, seed: u64) -> Result<ExperimentReport> {
        p.only(self.keys)?;
        (self.run)(p, seed)
    }
}

pub const MODULES: &[&str] = &["spectra", "zeta", "transfer", "covers", "anomaly", "gff", "rp"];

pub fn registry() -> &'static [Experiment] {
    const R: &[Experiment] = &[
        Experiment {
            module: "spectra",
            name: "cover",
            about: "cover spectrum against the union of twisted blocks",
            keys: &["vertices", "degree", "extra_edges"],
            run: spectra_cover,
        },
        Experiment {
            module: "zeta",
            name: "circle",
            about: "zeta determinant of a twisted massive circle against 2cosh(mL) − 2cosθ",
            keys: &["length", "mass", "theta", "n_max"],
            run: zeta_circle,
        },
        Experiment {
            module: "zeta",
            name: "bfk",
            about: "gluing formula on the flat torus",
            keys: &["l1", "l2", "mass", "cutoff"],
            run: zeta_bfk,
        },
        Experiment {
            module: "transfer",
            name: "gaussian",
            about: "tr(T^N) against the circulant Gaussian integral",
            keys: &["mass", "grid", "halfwidth", "n"],
            run: transfer_gaussian,
        },
        Experiment {
            module: "transfer",
            name: "free-energy",
            about: "free-energy density sequence and limit for P = Σ c_k σ^{2k}",
            keys: &["coeffs", "grid", "halfwidth", "n"],
            run: transfer_free_energy,
        },
        Experiment {
            module: "transfer",
            name: "mcmc",
            about: "seeded MCMC free energy against the transfer matrix",
            keys: &["coeffs", "n", "sweeps", "nodes", "grid", "halfwidth"],
            run: transfer_mcmc,
        },
        Experiment {
            module: "covers",
            name: "free-energy",
            about: "free-energy sequence of cyclic covers, block and direct routes",
            keys: &["geometry", "length", "l1", "l2", "mass", "n"],
            run: covers_free_energy,
        },
        Experiment {
            module: "covers",
            name: "heat",
            about: "eigenvalue and deck-sum heat traces on circle covers",
            keys: &["length", "n", "t"],
            run: covers_heat,
        },
        Experiment {
            module: "anomaly",
            name: "constant",
            about: "anomaly of a constant conformal factor on the round sphere",
            keys: &["c"],
            run: anomaly_constant,
        },
        Experiment {
            module: "anomaly",
            name: "renyi",
            about: "Rényi entropy of an interval on a circle from the branched weights",
            keys: &["length", "ell", "d", "c", "norm"],
            run: anomaly_renyi,
        },
        Experiment {
            module: "anomaly",
            name: "conical",
            about: "renormalized anomaly of the z^d pullback and its counterterm slope",
            keys: &["d"],
            run: anomaly_conical,
        },
        Experiment {
            module: "gff",
            name: "schur",
            about: "DN map against the inverse covariance block on random graphs",
            keys: &["graphs", "max_size"],
            run: gff_schur,
        },
        Experiment {
            module: "gff",
            name: "wick",
            about: "Monte Carlo of E[:X^n::Y^n:] against n!ρ^n",
            keys: &["rho", "power", "samples"],
            run: gff_wick,
        },
        Experiment {
            module: "rp",
            name: "line",
            about: "derivative-of-bump witness on the line",
            keys: &["kappa", "n_max"],
            run: rp_line,
        },
        Experiment {
            module: "rp",
            name: "cylinder",
            about: "line witness lifted to ℝ × circle",
            keys: &["lambda", "length", "n_max"],
            run: rp_cylinder,
        },
        Experiment {
            module: "rp",
            name: "compact",
            about: "dual moment witness on a circle, pairing −1/(λ*+1)",
            keys: &["lambda", "length", "basis"],
            run: rp_compact,
        },
        Experiment {
            module: "rp",
            name: "ball",
            about: "Fourier-ball witness in three dimensions",
            keys: &["lambda", "basis"],
            run: rp_ball,
        },
    ];
    R
}

pub fn find(module: &str, name: &str) -> Result<&'static Experiment> {
    registry()
        .iter()
        .find(|e| e.module == module && e.name == name)
        .ok_or_else(|| {
            let known: Vec<String> = registry()
                .iter()
                .filter(|e| e.module == module)
                .map(|e| e.name.to_string())
                .collect();
            CliError::usage(format!("unknown experiment {module}.{name}; known: {known:?}"))
        })
}

pub fn run_experiment(module: &str, name: &str, p: &Params, seed: u64) -> Result<ExperimentReport> {
    find(module, name)?.run(p, seed)
}

/// ½N·log π − ½Σ_k log(2 − 2cos(2πk/N) + m²).
pub fn circulant_log_z(n: usize, m: f64) -> f64 {
    let nf = n as f64;
    0.5 * nf * PI.ln()
        - 0.5
            * (0..n)
                .map(|k| (2.0 - 2.0 * (2.0 * PI * k as f64 / nf).cos() + m * m).ln())
                .sum::<f64>()
}

fn spectra_cover(p: &Params, seed: u64) -> Result<ExperimentReport> {
    let n = p.usize("vertices", 3)?;
    let degree = p.usize("degree", 4)?;
    let extra = p.usize("extra_edges", 0)?;
    let mut b = ReportBuilder::new("spectra.cover", Some(seed));
    b.input("vertices", n).input("degree", degree).input("extra_edges", extra);
    let mut g = spectra::CoverGraph::cycle(n, degree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v {
            g.edges.push((u, v, rng.random_range(-2..=2)));
        }
    }
    let d = cover_block_distance(&g)?;
    b.output("edges", g.edges.len());
    b.check("multiset_distance", d, 1e-10);
    Ok(b.finish())
}

/// Sorted-ℓ∞ distance between σ(L_N) and ⋃_p σ(L_{θ_p}).
pub fn cover_block_distance(g: &spectra::CoverGraph) -> Result<f64> {
    let cover = spectra::cycle_cover_build(g)?;
    let big = sym_eig(&cover.laplacian)?.values;
    let mut union = Vec::new();
    for block in spectra::twisted_block_decompose(g)? {
        union.extend(herm_eig(&block.laplacian)?.values);
    }
    Ok(spectra::multiset_distance(&big, &union))
}

pub fn circle_spectrum(length: f64, mass: f64, theta: f64, n_max: usize) -> Result<fieldlab_numerics::Spectrum> {
    Ok(spectra::twisted_circle_spectrum(&spectra::TwistedCircle { length, mass, theta }, n_max)?)
}

fn zeta_circle(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let (l, m, th) = (p.f64("length", 2.0 * PI)?, p.f64("mass", 1.0)?, p.f64("theta", 0.0)?);
    let n_max = p.usize("n_max", 16)?;
    let mut b = ReportBuilder::new("zeta.circle", None);
    b.input("length", l).input("mass", m).input("theta", th).input("n_max", n_max);
    let d = zeta::det_zeta(&circle_spectrum(l, m, th, n_max)?)?;
    let primed = d.kernel_dim > 0;
    let want = if primed { l * l } else { 2.0 * (m * l).cosh() - 2.0 * th.cos() };
    b.output("det", d.value)
        .output("log_det", d.log_det)
        .output("kernel_dim", d.kernel_dim)
        .output("closed_form", want)
        .output("method", format!("{:?}", d.method));
    b.check("relative_error", (d.value - want) / want, 1e-8);
    Ok(b.finish())
}

fn zeta_bfk(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let (l1, l2) = (p.f64("l1", 2.0 * PI)?, p.f64("l2", 2.0 * PI)?);
    let m = p.f64("mass", 1.0)?;
    let cutoff = p.usize("cutoff", 1024)?;
    let mut b = ReportBuilder::new("zeta.bfk", None);
    b.input("l1", l1).input("l2", l2).input("mass", m).input("cutoff", cutoff);
    let r = zeta::bfk_torus_check(l1, l2, m, cutoff)?;
    b.output("lhs", r.lhs)
        .output("rhs", r.rhs)
        .output("constant_offset", r.constant_offset)
        .output("log_det_dn", r.log_det_dn);
    b.check("residual", r.residual, 1e-5);
    Ok(b.finish())
}

fn transfer_gaussian(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let m = p.f64("mass", 1.0)?;
    let grid = p.usize("grid", 200)?;
    let hw = p.f64("halfwidth", 8.0)?;
    let ns = p.usize_list("n", &[8, 32, 64])?;
    let mut b = ReportBuilder::new("transfer.gaussian", None);
    b.input("mass", m).input("grid", grid).input("halfwidth", hw).input("n", &ns);
    let model = transfer::build_transfer(&transfer::EvenPoly::mass(m), grid, hw)?;
    let mut rows = Vec::new();
    for &n in &ns {
        let got = transfer::log_partition_function(&model, n)?;
        let want = circulant_log_z(n, m);
        rows.push((n, got, want));
        b.check("relative_error_z", (got - want).exp_m1(), 1e-8);
    }
    b.output("log_z", rows);
    Ok(b.finish())
}

fn poly(p: &Params, default: &[f64]) -> Result<transfer::EvenPoly> {
    Ok(transfer::EvenPoly::new(p.f64_list("coeffs", default)?)?)
}

fn transfer_free_energy(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let pot = poly(p, &[0.0, 0.0, 1.0])?;
    let grid = p.usize("grid", 200)?;
    let hw = p.f64("halfwidth", 8.0)?;
    let ns = p.usize_list("n", &[2, 4, 8, 16, 32])?;
    let mut b = ReportBuilder::new("transfer.free-energy", None);
    b.input("coeffs", &pot.coeffs).input("grid", grid).input("halfwidth", hw).input("n", &ns);
    let model = transfer::build_transfer(&pot, grid, hw)?;
    let fe = transfer::free_energy_density(&model, &ns)?;
    let top = transfer::top_eigenpair(&model)?;
    b.output("densities", &fe.densities)
        .output("limit", fe.limit)
        .output("alpha", top.alpha)
        .output("fit_rate", fe.fit_rate);
    // the density limit is log λ₀
    b.check("limit_vs_log_lambda0", fe.limit - top.lambda0.ln(), 1e-6);
    Ok(b.finish())
}

fn transfer_mcmc(p: &Params, seed: u64) -> Result<ExperimentReport> {
    let pot = poly(p, &[0.0, 0.0, 1.0])?;
    let n = p.usize("n", 32)?;
    let sweeps = p.usize("sweeps", 100_000)?;
    let nodes = p.usize("nodes", 8)?;
    let grid = p.usize("grid", 200)?;
    let hw = p.f64("halfwidth", 8.0)?;
    let mut b = ReportBuilder::new("transfer.mcmc", Some(seed));
    b.input("coeffs", &pot.coeffs).input("n", n).input("sweeps", sweeps).input("nodes", nodes);
    mcmc_report(&mut b, &pot, n, sweeps, nodes, grid, hw, seed)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn mcmc_report(
    b: &mut ReportBuilder,
    pot: &transfer::EvenPoly,
    n: usize,
    sweeps: usize,
    nodes: usize,
    grid: usize,
    hw: f64,
    seed: u64,
) -> Result<ExperimentReport> {
    let model = transfer::build_transfer(pot, grid, hw)?;
    let exact = transfer::log_partition_function(&model, n)? / n as f64;
    let est = transfer::mcmc_free_energy(pot, n, sweeps, nodes, seed, transfer::McmcOptions::default())?;
    b.output("transfer_density", exact)
        .output("mcmc_density", est.density)
        .output("standard_error", est.standard_error)
        .output("acceptance_rates", &est.acceptance_rates);
    b.check("mcmc_minus_transfer", est.density - exact, 3.0 * est.standard_error);
    Ok(b.finish())
}

fn covers_free_energy(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let kind = p.string("geometry", "circle")?;
    let m = p.f64("mass", 0.0)?;
    let ns = p.usize_list("n", &[2, 4, 8, 16, 32])?;
    let geom = match kind.as_str() {
        "circle" => covers::CoverGeometry::Circle { length: p.f64("length", 1.0)? },
        "torus" => covers::CoverGeometry::TorusStrip { l1: p.f64("l1", 1.0)?, l2: p.f64("l2", 1.0)? },
        other => return Err(CliError::usage(format!("geometry must be circle or torus, got {other}"))),
    };
    let mut b = ReportBuilder::new("covers.free-energy", None);
    b.input("geometry", &kind).input("mass", m).input("n", &ns);
    let seq = covers::free_energy_sequence(&geom, m, &ns)?;
    b.output("values", &seq.values)
        .output("limit", seq.limit_estimate.value)
        .output("limit_error", seq.limit_estimate.error_estimate)
        .output("converged", seq.limit_estimate.converged);
    b.check("route_gap", seq.max_route_gap, 1e-6);
    b.require("converged", seq.limit_estimate.converged);
    Ok(b.finish())
}

fn covers_heat(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let l = p.f64("length", 2.0 * PI)?;
    let ns = p.usize_list("n", &[1, 2, 4, 8, 16, 32, 64])?;
    let ts = p.f64_list("t", &[0.05, 0.1, 1.0, 10.0, 100.0])?;
    let mut b = ReportBuilder::new("covers.heat", None);
    b.input("length", l).input("n", &ns).input("t", &ts);
    let mut rows = Vec::new();
    for &n in &ns {
        for &t in &ts {
            let h = covers::heat_trace_cover(l, n, t)?;
            b.check("eigen_vs_deck", h.difference(), 1e-10);
            rows.push((n, t, h.eigen_sum));
        }
    }
    b.output("traces", rows);
    Ok(b.finish())
}

fn anomaly_constant(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let c = p.f64("c", 1.0)?;
    let mut b = ReportBuilder::new("anomaly.constant", None);
    b.input("c", c);
    let a = anomaly::anomaly_smooth(
        &anomaly::SphereFn::constant(c),
        &anomaly::SphereFn::zero(),
        &anomaly::SphereQuad::default(),
    )?;
    b.output("anomaly", a.value).output("closed_form", c / 3.0);
    b.check("error", a.value - c / 3.0, 1e-8);
    Ok(b.finish())
}

fn anomaly_renyi(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let l = p.f64("length", 1.0)?;
    let ell = p.f64("ell", 0.25)?;
    let d = p.usize("d", 2)? as u32;
    let c = p.f64("c", 1.0)?;
    let norm = p.f64("norm", 1.0)?;
    let mut b = ReportBuilder::new("anomaly.renyi", None);
    b.input("length", l).input("ell", ell).input("d", d).input("c", c).input("norm", norm);
    let r = anomaly::renyi_entropy(l, ell, d, c, norm)?;
    b.output("entropy", r.entropy)
        .output("exponent", r.exponent)
        .output("chord", r.chord)
        .output("trace", r.trace);
    let df = d as f64;
    b.check("exponent_vs_weight", r.exponent + c / 6.0 * (df - 1.0 / df), 1e-14);
    Ok(b.finish())
}

fn anomaly_conical(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let d = p.usize("d", 2)? as u32;
    let mut b = ReportBuilder::new("anomaly.conical", None);
    b.input("d", d);
    let data = anomaly::ConicalSurfaceData::power_pullback(d)?;
    let q = anomaly::SphereQuad::default();
    let e = anomaly::EpsLadder::fitted(&data)?;
    let zero = anomaly::SphereFn::zero();
    let a = anomaly::anomaly_renormalized(&data, &zero, &e, &q)?;
    let s = anomaly::counterterm_slope(&data, &zero, &e, &q)?;
    b.output("renormalized", a.value)
        .output("counterterm_coefficient", anomaly::counterterm_coefficient(&data))
        .output("slope", s.slope)
        .output("predicted_slope", s.predicted);
    b.check("slope_relative_error", s.rel_err, 0.02);
    Ok(b.finish())
}

pub(crate) fn random_net(rng: &mut ChaCha8Rng, max: usize) -> Result<gff::GaussianNetwork> {
    let n = rng.random_range(4..=max.max(4));
    let m = rng.random_range(0.3..1.5);
    Ok(gff::GaussianNetwork::random_connected(n, 3.0 / n as f64, m, rng)?)
}

pub(crate) fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        v.swap(i, j);
    }
    v.truncate(k);
    v
}

pub(crate) fn select(m: &DMatrix<f64>, r: &[usize], c: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(r.len(), c.len(), |i, j| m[(r[i], c[j])])
}

/// max |DN⁻¹ − C_ΣΣ| relative to max|C|, over random graphs and subsets.
pub(crate) fn schur_duality(rng: &mut ChaCha8Rng, graphs: usize, max: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..graphs {
        let net = random_net(rng, max)?;
        let n = net.len();
        let k = rng.random_range(1..n);
        let sigma = random_subset(rng, n, k);
        let dn = gff::dn_schur(&net, &sigma)?;
        let c = gff::covariance(&net)?;
        let inv = dn
            .try_inverse()
            .ok_or_else(|| CliError::usage("singular DN map"))?;
        let scale = c.amax().max(1.0);
        worst = worst.max((inv - select(&c, &sigma, &sigma)).amax() / scale);
    }
    Ok(worst)
}

fn gff_schur(p: &Params, seed: u64) -> Result<ExperimentReport> {
    let graphs = p.usize("graphs", 100)?;
    let max = p.usize("max_size", 60)?;
    let mut b = ReportBuilder::new("gff.schur", Some(seed));
    b.input("graphs", graphs).input("max_size", max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    b.check("schur_duality", schur_duality(&mut rng, graphs, max)?, 1e-12);
    Ok(b.finish())
}

fn gff_wick(p: &Params, seed: u64) -> Result<ExperimentReport> {
    let rho = p.f64("rho", 0.6)?;
    let n = p.usize("power", 3)? as u32;
    let samples = p.usize("samples", 1_000_000)?;
    let mut b = ReportBuilder::new("gff.wick", Some(seed));
    b.input("rho", rho).input("power", n).input("samples", samples);
    let c = DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]);
    let f = [
        gff::WickFactor { var: 0, power: n, ordered: true },
        gff::WickFactor { var: 1, power: n, ordered: true },
    ];
    let (m, se) = gff::wick_monte_carlo(&c, &f, samples, seed)?;
    let exact = gff::wick_product_expectation(&c, &f)?;
    b.output("monte_carlo", m).output("standard_error", se).output("exact", exact);
    b.check("mc_minus_exact", m - exact, 3.0 * se);
    Ok(b.finish())
}

pub(crate) fn certificate_checks(b: &mut ReportBuilder, c: &rp::WitnessCertificate) -> Result<()> {
    b.output("certificate", c);
    b.check("reevaluation", c.verify()?, 1e-10);
    b.check("uncut_negativity", (-c.uncut_pairing).max(0.0), 1e-12);
    b.require("negative", c.negative);
    Ok(())
}

fn rp_line(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let kappa = p.f64("kappa", 1.0)?;
    let n_max = p.usize("n_max", 40)?;
    let mut b = ReportBuilder::new("rp.line", None);
    b.input("kappa", kappa).input("n_max", n_max);
    certificate_checks(&mut b, &rp::line_witness(kappa, n_max)?)?;
    Ok(b.finish())
}

fn rp_cylinder(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let lambda = p.f64("lambda", 10.0)?;
    let length = p.f64("length", 2.0 * PI)?;
    let n_max = p.usize("n_max", 40)?;
    let mut b = ReportBuilder::new("rp.cylinder", None);
    b.input("lambda", lambda).input("length", length).input("n_max", n_max);
    certificate_checks(&mut b, &rp::cylinder_witness(lambda, length, n_max)?)?;
    Ok(b.finish())
}

fn rp_compact(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let lambda = p.f64("lambda", 4.0)?;
    let length = p.f64("length", 2.0 * PI)?;
    let basis = p.usize("basis", 0)?;
    let mut b = ReportBuilder::new("rp.compact", None);
    b.input("lambda", lambda).input("length", length).input("basis", basis);
    let params = rp::CompactParams {
        length,
        lambda,
        basis_size: (basis > 0).then_some(basis),
        margin: 0.02,
    };
    let c = rp::compact_witness(&params)?;
    certificate_checks(&mut b, &c)?;
    if let Some(t) = c.target {
        b.check("closed_form", c.pairing_value - t, 1e-8);
    }
    Ok(b.finish())
}

fn rp_ball(p: &Params, _seed: u64) -> Result<ExperimentReport> {
    let lambda = p.f64("lambda", 4.0)?;
    let basis = p.usize("basis", 8)?;
    let mut b = ReportBuilder::new("rp.ball", None);
    b.input("lambda", lambda).input("basis", basis);
    let c = rp::fourier_ball_witness(&rp::BallParams::new(lambda, basis))?;
    certificate_checks(&mut b, &c)?;
    if let Some(t) = c.target {
        b.check("relative_gap_to_target", (c.pairing_value - t) / t, 0.1);
    }
    b.output("diagnostics", &c.diagnostics);
    Ok(b.finish())
}
