//! Run configs: TOML with optional top-level `seed`, `out_dir`, `format`
//! and one `[module.experiment]` section per experiment.
//!
//! ```toml
//! seed = 7
//! [transfer.gaussian]
//! n = [8, 32, 64]
//! [anomaly.renyi]
//! length = 1.0
//! ell = 0.25
//! ```

use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::error::{CliError, Result};
use crate::experiments::{find, MODULES};
use crate::params::Params;

#[derive(Debug, Clone)]
pub struct RunEntry {
    pub module: String,
    pub name: String,
    pub params: Params,
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<String>,
    pub entries: Vec<RunEntry>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::usage(format!("config: {}", e.message())))?;
        let mut cfg = RunConfig::default();
        for (key, value) in table {
            match (key.as_str(), value) {
                ("seed", Value::Integer(s)) if s >= 0 => cfg.seed = Some(s as u64),
                ("out_dir", Value::String(s)) => cfg.out_dir = Some(s.into()),
                ("format", Value::String(s)) => cfg.format = Some(s),
                (m, Value::Table(exps)) if MODULES.contains(&m) => {
                    for (name, v) in exps {
                        let Value::Table(p) = v else {
                            return Err(CliError::usage(format!("config: [{m}.{name}] must be a section")));
                        };
                        find(m, &name)?;
                        cfg.entries.push(RunEntry {
                            module: m.to_string(),
                            name,
                            params: Params::new(p),
                        });
                    }
                }
                (k, _) => return Err(CliError::usage(format!("config: unexpected key {k}"))),
            }
        }
        if cfg.entries.is_empty() {
            return Err(CliError::usage("config names no experiments"));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
