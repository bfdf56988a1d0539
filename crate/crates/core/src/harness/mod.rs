//! Experiment configuration, built-in problems, trace files, rate fits and
//! regime tables.

mod config;
mod gradest;
mod rates;
mod regimes;
mod registry;
mod run;

pub use config::{ExperimentConfig, ProblemSource};
pub use gradest::{gradient_statistics, GradStats};
pub use rates::{fit_rate, SlopeReport, MIN_FIT_POINTS};
pub use regimes::{emit_zsg_regimes, log_space, regime_row, zsg_regimes, RegimeRow, LABELS};
pub use registry::{builtin, default_method, quadratic_spectrum, BuiltinProblem, BUILTIN_NAMES};
pub use run::{
    median, quantile, read_trace_csv, run_experiment, run_reps, sweep_iterations, sweep_theta, write_trace_csv,
    CsvRow, ExperimentReport, RepOutcome, SweepResult, Summary,
};
