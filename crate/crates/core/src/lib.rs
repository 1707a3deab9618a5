//! Simulation and certification of quantum processes with indefinite causal order.
//!
//! The crate builds classical process functions and process matrices (the
//! Lugano process, the quantum switch, QC-QC conversions), computes the
//! distributed measurements they induce on auxiliary systems, and certifies
//! causal (non)separability by exact strategy enumeration and by
//! semidefinite feasibility with verified infeasibility certificates.

pub mod certification;
pub mod error;
pub mod hilbert;
pub mod process_functions;
pub mod measurements;
pub mod process_matrices;
pub mod random;

pub use error::{Error, Result};
