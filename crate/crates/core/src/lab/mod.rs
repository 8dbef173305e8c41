//! Experiment orchestration: sweep configuration, replication, CSV and
//! JSON output, statistics, scaling fits and the verification suite.

mod config;
pub mod experiments;
mod fit;
mod gen;
mod record;
mod stats;
mod sweep;
mod verify;

pub use config::{
    Algorithm, GridPoint, MutationSpec, ProblemSpec, SpaceSpec, StopSpec, SweepConfig,
};
pub use fit::{
    bound_params_of, fit_scaling, fit_scaling_with, FitPoint, FitPolicy, FitResult, Milestone,
    Verdict,
};
pub use gen::{random_coverage, random_graph};
pub use record::{
    read_csv, read_jsonl, records_to_csv_string, write_csv, CsvSink, RunRecord, CSV_COLUMNS,
};
pub use stats::{bootstrap_mean_ci, mean, median, ols, std_dev, Interval, BOOTSTRAP_RESAMPLES};
pub use sweep::{
    run_one, run_sweep, run_sweep_files, run_sweep_to, run_sweep_with, scenarios, Scenario,
    ONE_MINUS_INV_E,
};
pub use verify::{verify_suite, verify_suite_with, Level, Report, VerifyOptions};
