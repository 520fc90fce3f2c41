//! Config-driven trial runner: online correction trials, parameter sweeps,
//! the behavior-cloning baseline, metrics and CSV output.

mod config;
mod metrics;
mod output;
mod sweep;
mod trial;

pub use config::{ExperimentConfig, StartJitter};
pub use metrics::{compute_metrics, mean_std, moving_average, regret_ratio, Metrics};
pub use output::{read_weights, trial_csv, write_file, write_trial_csv, write_weights, TRIAL_CSV_HEADER};
pub use sweep::{run_sweep, summary_csv, SweepAxis, SweepRow, SIGMA_VALUES, SUMMARY_CSV_HEADER, THRESHOLD_VALUES};
pub use trial::{observe, run_bc_baseline, run_trial, Experiment, Observation, StepRecord, TrialLog};
