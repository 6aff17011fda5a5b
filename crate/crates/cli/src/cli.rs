use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::experiments::{self, MODULES};
use crate::params::Params;
use crate::report::ExperimentReport;
use crate::suite::{self, DEFAULT_SEED};
use crate::tables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "fieldlab", version, about = "Numerical experiments for Euclidean field theory on covers, networks and surfaces")]
pub struct Cli {
    /// Seed for every randomized experiment.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write <id>.json and <id>.csv for every report here.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModuleArgs {
    /// Experiment name; `list` shows the available ones.
    pub experiment: String,
    /// key=value parameter, repeatable.
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Line,
    Cylinder,
    Compact,
    Ball,
}

#[derive(Debug, Args)]
pub struct RpArgs {
    #[arg(long, value_enum, default_value = "line")]
    pub construction: Construction,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long = "lambda", alias = "Lambda")]
    pub lambda: Option<f64>,
    /// Circle length.
    #[arg(long = "length", alias = "L")]
    pub length: Option<f64>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub basis: Option<usize>,
    /// Save the witness certificate as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-evaluate a saved certificate instead of constructing one.
    #[arg(long, conflicts_with = "out")]
    pub check: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    Spectra(ModuleArgs),
    Zeta(ModuleArgs),
    Transfer(ModuleArgs),
    Covers(ModuleArgs),
    Anomaly(ModuleArgs),
    Gff(ModuleArgs),
    /// Reflection-positivity witnesses.
    Rp(RpArgs),
    /// Run the acceptance criteria.
    Verify {
        #[arg(long, conflicts_with = "criterion")]
        all: bool,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=13))]
        criterion: Vec<u8>,
    },
    /// Print a named table as CSV.
    Table {
        /// Table name; `list` shows the available ones.
        name: String,
    },
    /// Run every experiment in a TOML config.
    Run { config: PathBuf },
}

struct Ctx {
    seed: u64,
    /// --format given on the command line.
    explicit_format: bool,
    out_dir: Option<PathBuf>,
    format: Format,
}

impl Ctx {
    fn emit(&self, reports: &[ExperimentReport], out: &mut impl Write) -> Result<()> {
        if let Some(dir) = &self.out_dir {
            for r in reports {
                r.write_artifacts(dir)?;
            }
        }
        match self.format {
            Format::Json => {
                let text = if let [r] = reports {
                    r.to_json()?
                } else {
                    serde_json::to_string_pretty(reports)?
                };
                writeln!(out, "{text}")?;
            }
            Format::Csv => {
                for r in reports {
                    write!(out, "{}", r.to_csv()?)?;
                }
            }
        }
        Ok(())
    }
}

fn list_experiments(module: &str, out: &mut impl Write) -> Result<()> {
    for e in experiments::registry().iter().filter(|e| e.module == module) {
        writeln!(out, "{:<14} {}  [keys: {}]", e.name, e.about, e.keys.join(", "))?;
    }
    Ok(())
}

fn rp_params(a: &RpArgs) -> (&'static str, Params) {
    let mut p = Params::default();
    if let Some(v) = a.kappa {
        p.set("kappa", v);
    }
    if let Some(v) = a.lambda {
        p.set("lambda", v);
    }
    if let Some(v) = a.length {
        p.set("length", v);
    }
    if let Some(v) = a.n_max {
        p.set("n_max", v as i64);
    }
    if let Some(v) = a.basis {
        p.set("basis", v as i64);
    }
    let name = match a.construction {
        Construction::Line => "line",
        Construction::Cylinder => "cylinder",
        Construction::Compact => "compact",
        Construction::Ball => "ball",
    };
    (name, p)
}

fn check_certificate(path: &Path) -> Result<ExperimentReport> {
    let text = std::fs::read_to_string(path)?;
    let cert: fieldlab_rpwitness::WitnessCertificate = serde_json::from_str(&text)?;
    let mut b = crate::report::ReportBuilder::new("rp.check", None);
    b.input("path", path.display().to_string())
        .input("construction", format!("{:?}", cert.construction()));
    experiments::certificate_checks(&mut b, &cert)?;
    Ok(b.finish())
}

/// Runs a parsed command and returns the exit code: 0 when every report
/// passes, 1 otherwise.
pub fn execute(cli: Cli, out: &mut impl Write) -> Result<i32> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::usage("--threads must be positive"));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let mut ctx = Ctx {
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        explicit_format: cli.format.is_some(),
        out_dir: cli.out_dir,
        format: cli.format.unwrap_or(Format::Json),
    };
    let reports = match cli.command {
        Command::Spectra(a) => module(&ctx, "spectra", a, out)?,
        Command::Zeta(a) => module(&ctx, "zeta", a, out)?,
        Command::Transfer(a) => module(&ctx, "transfer", a, out)?,
        Command::Covers(a) => module(&ctx, "covers", a, out)?,
        Command::Anomaly(a) => module(&ctx, "anomaly", a, out)?,
        Command::Gff(a) => module(&ctx, "gff", a, out)?,
        Command::Rp(a) => {
            if let Some(path) = &a.check {
                vec![check_certificate(path)?]
            } else {
                let (name, p) = rp_params(&a);
                let r = experiments::run_experiment("rp", name, &p, ctx.seed)?;
                if let Some(path) = &a.out {
                    let cert = r.outputs.get("certificate").expect("rp reports carry a certificate");
                    std::fs::write(path, serde_json::to_string_pretty(cert)?)?;
                }
                vec![r]
            }
        }
        Command::Verify { all, criterion } => {
            if !all && criterion.is_empty() {
                return Err(CliError::usage("verify needs --all or --criterion N"));
            }
            return verify(&ctx, &criterion, out);
        }
        Command::Table { name } => {
            if name == "list" {
                for t in tables::tables() {
                    writeln!(out, "{:<20} {}  [{}]", t.name, t.about, t.columns.join(", "))?;
                }
            } else {
                write!(out, "{}", tables::table_csv(&name)?)?;
            }
            return Ok(0);
        }
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            if cli.seed.is_none() {
                ctx.seed = cfg.seed.unwrap_or(DEFAULT_SEED);
            }
            if ctx.out_dir.is_none() {
                ctx.out_dir = cfg.out_dir.clone();
            }
            if cli.format.is_none() {
                ctx.format = match cfg.format.as_deref() {
                    None | Some("json") => Format::Json,
                    Some("csv") => Format::Csv,
                    Some(f) => return Err(CliError::usage(format!("config: unknown format {f}"))),
                };
            }
            cfg.entries
                .iter()
                .map(|e| experiments::run_experiment(&e.module, &e.name, &e.params, ctx.seed))
                .collect::<Result<Vec<_>>>()?
        }
    };
    if reports.is_empty() {
        return Ok(0);
    }
    ctx.emit(&reports, out)?;
    Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn module(ctx: &Ctx, name: &str, a: ModuleArgs, out: &mut impl Write) -> Result<Vec<ExperimentReport>> {
    debug_assert!(MODULES.contains(&name));
    if a.experiment == "list" {
        list_experiments(name, out)?;
        return Ok(Vec::new());
    }
    let p = Params::from_pairs(&a.params)?;
    Ok(vec![experiments::run_experiment(name, &a.experiment, &p, ctx.seed)?])
}

/// Summary table on stdout, one row per criterion; `--format json` prints
/// the full reports instead.
fn verify(ctx: &Ctx, ids: &[u8], out: &mut impl Write) -> Result<i32> {
    let selected: Vec<&suite::Criterion> = if ids.is_empty() {
        suite::criteria().iter().collect()
    } else {
        ids.iter().filter_map(|&i| suite::criterion(i)).collect()
    };
    let json = ctx.explicit_format && ctx.format == Format::Json;
    let mut passed = 0;
    let mut reports = Vec::new();
    for c in &selected {
        let r = c.run(ctx.seed);
        let line = suite::summary_line(c, &r);
        if json {
            eprintln!("{line}");
        } else {
            writeln!(out, "{line}")?;
        }
        match r {
            Ok(rep) => {
                passed += rep.pass as usize;
                reports.push(rep);
            }
            Err(e) => eprintln!("{}", e.to_json()),
        }
    }
    if let Some(dir) = &ctx.out_dir {
        for r in &reports {
            r.write_artifacts(dir)?;
        }
    }
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?;
    } else {
        writeln!(out, "{passed}/{} criteria passed", selected.len())?;
    }
    Ok(if passed == selected.len() { 0 } else { 1 })
}
