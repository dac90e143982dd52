//! Scenario runner: config files in, plot-ready data files out.

pub mod builtin;
pub mod config;
pub mod output;
pub mod runner;

pub use builtin::{default_config, DEFAULT_MASTER_SEED, E_GLYPH};
pub use config::{OutputFormat, Plan, ScenarioConfig, ScenarioId};
pub use output::{write_outputs, Table};
pub use runner::{
    run_ensemble, run_ensemble_with, run_scenario, run_scenario_with, EnsembleStats, Execution,
    Outcome, RunResult,
};
