//! Config-driven runner for the vibron library: scenario execution,
//! trajectory emission (CSV + JSON summaries), and trajectory comparison.

pub mod compare;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use error::{CliError, CliResult};
