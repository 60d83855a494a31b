//! Run configuration, study orchestration and CSV output.

mod config;
mod study;

pub use config::{parse_config, parse_config_with_overrides, ExactKind, RunConfig, StudyKind};
pub use study::{
    energy_trace, run_point, run_study, state_errors, EnergyReport, StepErrors, StudyFailure, StudyOutput,
};
