use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use crate::error::Result;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub id: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    /// Nonnegative; non-finite values are stored as f64::MAX.
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub pass: bool,
    pub runtime_ms: u64,
    pub seed: Option<u64>,
}

impl ExperimentReport {
    /// pass = every residual has a tolerance and sits at or below it.
    pub fn recompute_pass(&self) -> bool {
        self.residuals
            .iter()
            .all(|(k, r)| self.tolerances.get(k).is_some_and(|t| r <= t))
    }

    /// (name, residual, tolerance) rows that fail.
    pub fn failures(&self) -> Vec<(String, f64, f64)> {
        self.residuals
            .iter()
            .filter_map(|(k, &r)| {
                let t = self.tolerances.get(k).copied().unwrap_or(f64::NAN);
                (!(r <= t)).then(|| (k.clone(), r, t))
            })
            .collect()
    }

    /// Largest residual/tolerance ratio, 0 for a zero residual.
    pub fn worst_ratio(&self) -> f64 {
        self.residuals
            .iter()
            .map(|(k, &r)| {
                let t = self.tolerances.get(k).copied().unwrap_or(0.0);
                if r == 0.0 {
                    0.0
                } else if t == 0.0 {
                    f64::INFINITY
                } else {
                    r / t
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Flat rows section,name,value; structured values are written as JSON.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["section", "name", "value"])?;
        let text = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        w.write_record(["meta", "id", &self.id])?;
        w.write_record(["meta", "pass", &self.pass.to_string()])?;
        w.write_record(["meta", "runtime_ms", &self.runtime_ms.to_string()])?;
        if let Some(s) = self.seed {
            w.write_record(["meta", "seed", &s.to_string()])?;
        }
        for (k, v) in &self.inputs {
            w.write_record(["input", k, &text(v)])?;
        }
        for (k, v) in &self.outputs {
            w.write_record(["output", k, &text(v)])?;
        }
        for (k, v) in &self.residuals {
            w.write_record(["residual", k, &v.to_string()])?;
        }
        for (k, v) in &self.tolerances {
            w.write_record(["tolerance", k, &v.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| crate::CliError::Io { message: e.to_string() })?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    /// Writes <dir>/<id>.json and <dir>/<id>.csv.
    pub fn write_artifacts(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let stem = self.id.replace(['/', ' '], "_");
        std::fs::write(dir.join(format!("{stem}.json")), self.to_json()?)?;
        std::fs::write(dir.join(format!("{stem}.csv")), self.to_csv()?)?;
        Ok(())
    }
}

/// Accumulates a report; `finish` stamps runtime and pass.
pub struct ReportBuilder {
    report: ExperimentReport,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(id: impl Into<String>, seed: Option<u64>) -> Self {
        ReportBuilder {
            report: ExperimentReport {
                schema: SCHEMA,
                id: id.into(),
                inputs: BTreeMap::new(),
                outputs: BTreeMap::new(),
                residuals: BTreeMap::new(),
                tolerances: BTreeMap::new(),
                pass: false,
                runtime_ms: 0,
                seed,
            },
            start: Instant::now(),
        }
    }

    /// Non-finite floats serialize as null.
    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.report.inputs.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    pub fn output(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.report.outputs.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    /// Records |residual| against a tolerance; keeps the worst value when a
    /// name is checked repeatedly.
    pub fn check(&mut self, name: &str, residual: f64, tolerance: f64) -> &mut Self {
        let r = if residual.is_finite() { residual.abs() } else { f64::MAX };
        let e = self.report.residuals.entry(name.into()).or_insert(0.0);
        *e = e.max(r);
        self.report.tolerances.insert(name.into(), tolerance);
        self
    }

    /// A yes/no condition as residual 0 or 1 against tolerance 0.
    pub fn require(&mut self, name: &str, ok: bool) -> &mut Self {
        self.check(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn finish(&mut self) -> ExperimentReport {
        let mut r = self.report.clone();
        r.runtime_ms = self.start.elapsed().as_millis() as u64;
        r.pass = !r.residuals.is_empty() && r.recompute_pass();
        r
    }
}
