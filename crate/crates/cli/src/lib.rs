//! `icocert`: scenario configuration, named verification pipelines and
//! reports on top of `causal-core`.

pub mod app;
pub mod catalog;
pub mod checks;
pub mod config;
pub mod pipeline;
pub mod report;
pub mod resolve;

pub use catalog::{list_builtins, Catalog, CatalogEntry};
pub use config::{InstrumentsRef, ScenarioConfig, Tolerances};
pub use pipeline::{run_pipeline, PipelineOutput};
pub use report::{Artifact, Entry, Outcome, Report};

use thiserror::Error;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "ICOCERT_OUT";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] causal_core::Error),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
