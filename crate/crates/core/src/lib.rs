//! Action-probability-modulated temporal-difference learning.
//!
//! The crate pairs a conventional Q-learning update with a variant that
//! scales the TD error by the probability the executed action had under the
//! softmax policy. Both rules are available in tabular form and as a small
//! deep Q-network, and can be compared on two nonstationary tasks: a rotating
//! multi-armed bandit and a rule-switching classification task modelled on
//! the Wisconsin Card Sorting Test.
//!
//! Module map:
//! - [`learning`]: softmax policy, TD error, the two update rules, tabular agent.
//! - [`env`]: the rotating bandit and the card-sorting task.
//! - [`neural`]: a one-hidden-layer perceptron, replay buffer and DQN agent.
//! - [`experiments`]: runners, grid search, metrics and sweeps.

pub mod env;
pub mod error;
pub mod experiments;
pub mod learning;
pub mod neural;
pub mod seeds;

pub use error::{Error, Result};
pub use learning::{ActionValues, Hyperparams, PolicyDistribution, Rule};
