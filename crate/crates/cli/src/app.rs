//! Command-line front end. Exit codes: 0 success, 1 a check failed (or the
//! opposite verdict was certified), 2 bad input or configuration, 3 inconclusive.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::ScenarioConfig;
use crate::pipeline::{pipeline_config, run_pipeline};
use crate::report::write_outputs;
use crate::{list_builtins, resolve, CliError, Result, OUT_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "icocert", version, about = "Build, measure and certify indefinite-causal-order scenarios")]
pub struct Cli {
    /// Directory for report.txt and JSON artifacts.
    #[arg(long, global = true, env = OUT_ENV)]
    pub out: Option<PathBuf>,
    /// Seed for sampled checks and see-saw restarts.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Residual target of the separability solver.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Game {
    Lugano,
    Shift,
    Ndi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Definition {
    P2f,
    Tri,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verdict {
    Separable,
    Nonseparable,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    Seesaw,
    Exact,
    Relaxation,
    Mixture,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a process (function name, built-in process matrix, or JSON file).
    Build {
        process: String,
        /// Also run the sampled validity check.
        #[arg(long)]
        validate: bool,
    },
    /// Build a distributed measurement and check completeness.
    Measure {
        measurement: String,
        /// Also compute the identification value on this ensemble.
        #[arg(long)]
        ensemble: Option<String>,
    },
    /// Evaluate a game on a process (lugano, ndi) or a measurement (shift).
    Game {
        game: Game,
        resource: String,
        #[arg(long)]
        ensemble: Option<String>,
    },
    /// Decide causal separability of a measurement.
    Certify {
        definition: Definition,
        measurement: String,
        /// Verdict that counts as success.
        #[arg(long, value_enum, default_value = "nonseparable")]
        expect: Verdict,
    },
    /// Causal bounds for the games.
    Bound {
        kind: BoundKind,
        /// Measurement for `mixture` (default: shift).
        measurement: Option<String>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Run a scenario file, a named pipeline, or a single check.
    Check { target: String },
    /// List built-in processes, measurements, ensembles, pipelines and checks.
    List,
}

fn config_for(command: &Command) -> Result<Option<ScenarioConfig>> {
    let cfg = match command {
        Command::Build { process, validate } => {
            let mut cfg = ScenarioConfig::for_checks(if *validate { &["validate"] } else { &[] });
            cfg.name = Some(format!("build {process}"));
            cfg.process = Some(process.clone());
            cfg
        }
        Command::Measure { measurement, ensemble } => {
            let checks: &[&str] = if ensemble.is_some() { &["completeness", "game-shift"] } else { &["completeness"] };
            let mut cfg = ScenarioConfig::for_checks(checks);
            cfg.name = Some(format!("measure {measurement}"));
            cfg.measurement = Some(measurement.clone());
            cfg.ensemble = ensemble.clone();
            cfg
        }
        Command::Game { game, resource, ensemble } => {
            let mut cfg = match game {
                Game::Lugano | Game::Ndi => {
                    if ensemble.is_some() {
                        return Err(CliError::Config("`--ensemble` only applies to the shift game".into()));
                    }
                    let mut cfg =
                        ScenarioConfig::for_checks(&[if *game == Game::Lugano { "game-lugano" } else { "game-ndi" }]);
                    cfg.process = Some(resource.clone());
                    cfg
                }
                Game::Shift => {
                    let mut cfg = ScenarioConfig::for_checks(&["game-shift"]);
                    let ens = match ensemble {
                        Some(e) => e.clone(),
                        None => {
                            let d = resolve::measurement(resource, None)?;
                            if d.wire_names().contains(&"Aux^P") { "shift_sdiqi" } else { "shift" }.to_string()
                        }
                    };
                    cfg.measurement = Some(resource.clone());
                    cfg.ensemble = Some(ens);
                    cfg
                }
            };
            cfg.name = Some(format!("game {game:?} {resource}").to_lowercase());
            cfg
        }
        Command::Certify { definition, measurement, expect } => {
            let d = match definition {
                Definition::P2f => "separability-p2f",
                Definition::Tri => "separability-tri",
            };
            let v = match expect {
                Verdict::Separable => "separable",
                Verdict::Nonseparable => "nonseparable",
                Verdict::Any => "any",
            };
            let mut cfg = ScenarioConfig::for_checks(&[&format!("{d}({v})")]);
            cfg.name = Some(format!("certify {d} {measurement}"));
            cfg.measurement = Some(measurement.clone());
            cfg
        }
        Command::Bound { kind, measurement, restarts } => {
            let check = match kind {
                BoundKind::Seesaw => "seesaw",
                BoundKind::Exact => "exact-bounds",
                BoundKind::Relaxation => "relaxation",
                BoundKind::Mixture => "mixture-threshold",
            };
            let mut cfg = ScenarioConfig::for_checks(&[check]);
            cfg.name = Some(format!("bound {check}"));
            match (kind, measurement) {
                (BoundKind::Mixture, m) => cfg.measurement = Some(m.clone().unwrap_or_else(|| "shift".into())),
                (_, Some(_)) => return Err(CliError::Config(format!("`bound {check}` takes no measurement"))),
                _ => {}
            }
            if let Some(r) = restarts {
                cfg.restarts = *r;
            }
            cfg
        }
        Command::Check { target } => {
            let path = Path::new(target);
            if path.is_file() {
                ScenarioConfig::from_file(path)?
            } else if let Some(cfg) = pipeline_config(target) {
                cfg
            } else {
                let mut cfg = ScenarioConfig::for_checks(&[target]);
                cfg.name = Some(target.clone());
                cfg
            }
        }
        Command::List => return Ok(None),
    };
    Ok(Some(cfg))
}

/// Runs a parsed command, printing the report; returns the exit code.
pub fn execute(cli: &Cli) -> Result<i32> {
    let Some(mut cfg) = config_for(&cli.command)? else {
        print!("{}", list_builtins().render());
        return Ok(EXIT_OK);
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.tol {
        cfg.tolerances.feas_tol = t;
    }
    let out = run_pipeline(&cfg)?;
    print!("{}", out.report.render());
    if let Some(dir) = &cli.out {
        write_outputs(dir, &out.report, &out.artifacts)?;
    }
    Ok(out.report.exit_code())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
