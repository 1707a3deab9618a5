//! Scenario configuration files (TOML). Unknown keys are errors.
//!
//! ```toml
//! process = "switch"            # built-in name or process JSON file
//! instruments = "switch_shift"  # preset, or a list of instrument JSON files
//! ensemble = "shift_sdiqi"
//! checks = ["completeness", "separability-p2f", "game-shift"]
//! seed = 0
//!
//! [tolerances]
//! feas_tol = 1e-7
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::checks::Check;
use crate::{resolve, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstrumentsRef {
    Preset(String),
    Files(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Entrywise agreement of constructions that must coincide.
    pub equality: f64,
    /// Probability normalization and POVM completeness.
    pub normalization: f64,
    /// Residual target of the separability solver.
    pub feas_tol: f64,
    /// Allowed distance of the see-saw value from the reference ≈0.9268.
    pub seesaw_window: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { equality: 1e-12, normalization: 1e-10, feas_tol: 1e-7, seesaw_window: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub process: Option<String>,
    #[serde(default)]
    pub instruments: Option<InstrumentsRef>,
    /// A D-POVM given directly (name or file) instead of process + instruments.
    #[serde(default)]
    pub measurement: Option<String>,
    #[serde(default)]
    pub ensemble: Option<String>,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    /// See-saw restarts.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Random instrument tuples per sampled normalization check.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Directory that relative file names are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn default_restarts() -> usize {
    32
}

fn default_samples() -> usize {
    200
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: None,
            process: None,
            instruments: None,
            measurement: None,
            ensemble: None,
            checks: Vec::new(),
            tolerances: Tolerances::default(),
            seed: 0,
            restarts: default_restarts(),
            samples: default_samples(),
            base_dir: None,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// A config running the named checks only.
    pub fn for_checks(checks: &[&str]) -> Self {
        ScenarioConfig { checks: checks.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    /// Positive tolerances, resolvable names, parseable checks.
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("equality", t.equality),
            ("normalization", t.normalization),
            ("feas_tol", t.feas_tol),
            ("seesaw_window", t.seesaw_window),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("tolerance `{name}` must be positive, got {v}")));
            }
        }
        if self.restarts == 0 || self.samples == 0 {
            return Err(CliError::Config("`restarts` and `samples` must be positive".into()));
        }
        if self.measurement.is_some() && self.instruments.is_some() {
            return Err(CliError::Config("give either `measurement` or `instruments`, not both".into()));
        }
        if self.instruments.is_some() && self.process.is_none() {
            return Err(CliError::Config("`instruments` need a `process`".into()));
        }
        let base = self.base_dir.as_deref();
        if let Some(p) = &self.process {
            resolve::process(p, base)?;
        }
        if let Some(i) = &self.instruments {
            resolve::instruments(i, base)?;
        }
        if let Some(m) = &self.measurement {
            resolve::measurement(m, base)?;
        }
        if let Some(e) = &self.ensemble {
            resolve::ensemble(e, base)?;
        }
        for c in &self.checks {
            c.parse::<Check>()?;
        }
        Ok(())
    }
}
