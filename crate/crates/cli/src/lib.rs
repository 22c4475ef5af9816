//! Scenario runner for swimwake-core: JSON scenario configs, run manifests,
//! validation suites and plot-ready CSV exports.

pub mod config;
pub mod error;
pub mod export;
pub mod output;
pub mod run;
pub mod validate;

pub use config::ScenarioConfig;
pub use error::{CliError, Result};
pub use export::export_plotdata;
pub use output::RunManifest;
pub use run::run_scenario;
pub use validate::validate;
