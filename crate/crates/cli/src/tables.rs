//! Named CSV tables. Column schemas are fixed per table.

use std::f64::consts::PI;

use fieldlab_covers as covers;
use fieldlab_rpwitness as rp;
use fieldlab_zeta as zeta;

use crate::error::{CliError, Result};

pub struct Table {
    pub name: &'static str,
    pub columns: &'static [&'static str],
    pub about: &'static str,
    rows: fn() -> Result<Vec<Vec<String>>>,
}

pub fn tables() -> &'static [Table] {
    const T: &[Table] = &[
        Table {
            name: "free-energy-circle",
            columns: &["N", "value", "limit", "abs_err"],
            about: "log det of the N-fold cover of the unit circle at m = 1, per unit length",
            rows: free_energy_circle,
        },
        Table {
            name: "bfk-torus",
            columns: &["cutoff", "lhs", "rhs", "residual"],
            about: "gluing formula on the (2π, 2π) torus at m = 1 against the mode cutoff",
            rows: bfk_torus,
        },
        Table {
            name: "rp-line",
            columns: &["n", "pairing"],
            about: "cut-off pairing of the n-th bump derivative on the line at κ = 1",
            rows: rp_line,
        },
    ];
    T
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn free_energy_circle() -> Result<Vec<Vec<String>>> {
    let ns = [2usize, 4, 8, 16, 32, 64];
    let seq = covers::free_energy_sequence(&covers::CoverGeometry::Circle { length: 1.0 }, 1.0, &ns)?;
    let limit = 1.0;
    Ok(ns
        .iter()
        .zip(&seq.values)
        .map(|(n, v)| vec![n.to_string(), num(*v), num(limit), num((v - limit).abs())])
        .collect())
}

fn bfk_torus() -> Result<Vec<Vec<String>>> {
    [64usize, 128, 256, 512, 1024]
        .iter()
        .map(|&c| {
            let r = zeta::bfk_torus_check(2.0 * PI, 2.0 * PI, 1.0, c)?;
            Ok(vec![c.to_string(), num(r.lhs), num(r.rhs), num(r.residual)])
        })
        .collect()
}

fn rp_line() -> Result<Vec<Vec<String>>> {
    let bump = rp::Bump::standard();
    (0..=10)
        .map(|n| Ok(vec![n.to_string(), num(rp::line_pairing(&bump, 1.0, n)?.value)]))
        .collect()
}

pub fn find(name: &str) -> Result<&'static Table> {
    tables().iter().find(|t| t.name == name).ok_or_else(|| {
        let known: Vec<&str> = tables().iter().map(|t| t.name).collect();
        CliError::usage(format!("unknown table {name}; known: {known:?}"))
    })
}

pub fn table_csv(name: &str) -> Result<String> {
    let t = find(name)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(t.columns)?;
    for row in (t.rows)()? {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io { message: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
