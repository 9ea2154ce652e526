//! Batch driver: configuration, parallel execution and report output.

mod config;
mod emit;
mod report;
mod run;

pub use config::{parse_config, AnalysisConfig, CheckKind, ConfigEcho, ConfigError, ConfigIssue, OutputFormat};
pub use emit::{emit, render, EmitError};
pub use report::{
    overall_status, CheckResult, ClassGroupCheck, ElasticityRepr, Report, ResultStatus, Timing, Unstable,
    SCHEMA_VERSION, TOOL_VERSION,
};
pub use run::{class_number_by_conductor, run_analysis, run_check, run_guarded};
