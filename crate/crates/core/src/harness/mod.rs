//! Experiment configuration, sweeps, validation runs and mobility runs.
//! The `coopsec` binary is a thin layer over these functions.

pub mod config;
pub mod mobility;
pub mod sweep;
pub mod validation;

pub use config::{Axis, Evaluation, EvePosition, ExperimentConfig, PolicyConfig, SweepSpec, PRESETS};
pub use mobility::{run_mobility, write_mobility_csv, MobilityRow};
pub use sweep::{run_sweep, SweepRow, SweepTable};
pub use validation::{run_validation, ValidationRun, VerdictCounts};
