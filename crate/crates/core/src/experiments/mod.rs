//! Experiment harness: episode runner, grid search, metrics and sweeps.

mod config;
mod metrics;
mod record;
mod runner;
mod search;
mod sweep;

pub use config::{EpisodeConfig, ExperimentConfig, HyperGrid, HyperSelection, TaskConfig, DEFAULT_GAMMA};
pub use metrics::{
    aggregate, cumulative_reward_summary, mean_time_to_preference, reward_per_step, time_to_preference,
    Preference, Summary, PREFERENCE_THRESHOLD, SMOOTHING_WINDOW, Z_95,
};
pub use record::{RegimeChange, RunRecord, StepRow};
pub use runner::{run_episode, run_experiment, ExperimentResult, RuleResult};
pub use search::{grid_search, GridResult};
pub use sweep::{sweep_choices, SweepRow};
