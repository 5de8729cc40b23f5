//! Defaults from `--config`, `QWSTAT_TOL` and built-in values.

use std::path::Path;

use qwstat_core::Topology;
use serde::Deserialize;

use crate::{Failure, EXIT_INPUT};

pub const DEFAULT_TOPOLOGY: Topology = Topology::Cycle(30);
pub const DEFAULT_STEPS: usize = 100;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const TOL_ENV: &str = "QWSTAT_TOL";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema: u32,
    topology: Option<Topology>,
    steps: Option<usize>,
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defaults {
    pub topology: Topology,
    pub steps: usize,
    pub tol: f64,
}

fn input_error(message: String) -> Failure {
    Failure { code: EXIT_INPUT, message }
}

impl Defaults {
    /// Built-in values, overridden by the config file, then by `QWSTAT_TOL`.
    pub fn load(path: Option<&Path>) -> Result<Defaults, Failure> {
        let mut d = Defaults { topology: DEFAULT_TOPOLOGY, steps: DEFAULT_STEPS, tol: DEFAULT_TOL };
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
            d.apply(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        }
        if let Ok(raw) = std::env::var(TOL_ENV) {
            d.tol = parse_tol(&raw).map_err(|e| input_error(format!("{TOL_ENV}: {e}")))?;
        }
        Ok(d)
    }

    fn apply(&mut self, text: &str) -> Result<(), String> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| e.to_string())?;
        if file.schema != 1 {
            return Err(format!("unsupported schema version {}", file.schema));
        }
        if let Some(t) = file.topology {
            self.topology = t;
        }
        if let Some(s) = file.steps {
            self.steps = s;
        }
        if let Some(t) = file.tol {
            self.tol = check_tol(t)?;
        }
        Ok(())
    }
}

pub fn check_tol(t: f64) -> Result<f64, String> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(format!("tolerance must be finite and non-negative, got {t}"))
    }
}

fn parse_tol(raw: &str) -> Result<f64, String> {
    let t: f64 = raw.trim().parse().map_err(|_| format!("not a number: {raw:?}"))?;
    check_tol(t)
}
