use toml::{Table, Value};

use crate::error::{CliError, Result};

/// Typed access to one config section; every lookup names its key in
/// usage errors.
#[derive(Debug, Clone, Default)]
pub struct Params {
    table: Table,
}

impl Params {
    pub fn new(table: Table) -> Self {
        Params { table }
    }

    /// key=value pairs, the value parsed as a TOML literal (bare words
    /// become strings).
    pub fn from_pairs<S: AsRef<str>>(pairs: &[S]) -> Result<Self> {
        let mut table = Table::new();
        for p in pairs {
            let (k, v) = p
                .as_ref()
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("expected key=value, got {:?}", p.as_ref())))?;
            let value = format!("v = {v}")
                .parse::<Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| Value::String(v.to_string()));
            table.insert(k.trim().to_string(), value);
        }
        Ok(Params { table })
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.table.insert(key.into(), v.into());
    }

    fn bad(key: &str, want: &str, got: &Value) -> CliError {
        CliError::usage(format!("parameter {key}: expected {want}, got {got}"))
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.table.get(key) {
            None => Ok(default),
            Some(Value::Float(x)) => Ok(*x),
            Some(Value::Integer(i)) => Ok(*i as f64),
            Some(v) => Err(Self::bad(key, "a number", v)),
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.table.get(key) {
            None => Ok(default),
            Some(Value::Integer(i)) if *i >= 0 => Ok(*i as usize),
            Some(v) => Err(Self::bad(key, "a nonnegative integer", v)),
        }
    }

    pub fn string(&self, key: &str, default: &str) -> Result<String> {
        match self.table.get(key) {
            None => Ok(default.to_string()),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(v) => Err(Self::bad(key, "a string", v)),
        }
    }

    pub fn f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.table.get(key) {
            None => Ok(default.to_vec()),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(i) => Ok(*i as f64),
                    other => Err(Self::bad(key, "a list of numbers", other)),
                })
                .collect(),
            Some(v) => Ok(vec![self.f64(key, 0.0).map_err(|_| Self::bad(key, "a list of numbers", v))?]),
        }
    }

    pub fn usize_list(&self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        match self.table.get(key) {
            None => Ok(default.to_vec()),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                    other => Err(Self::bad(key, "a list of nonnegative integers", other)),
                })
                .collect(),
            Some(v) => Ok(vec![self.usize(key, 0).map_err(|_| Self::bad(key, "a list of integers", v))?]),
        }
    }

    /// Rejects keys outside `known`, so typos do not pass silently.
    pub fn only(&self, known: &[&str]) -> Result<()> {
        match self.table.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(CliError::usage(format!("unknown parameter {k}; expected one of {known:?}"))),
            None => Ok(()),
        }
    }
}
