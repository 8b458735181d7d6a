//! Nonstationary tasks.
//!
//! Both environments change their reward structure at exact multiples of
//! `change_period` steps, after the reward for the boundary step has been
//! issued. Trajectories are a pure function of configuration and seed.

mod bandit;
mod cardsort;

pub use bandit::{Bandit, HIGH_PROB, LOW_PROB, FILL_RANGE};
pub use cardsort::{Card, CardSort, CardSortParams, DEFAULT_CLUSTER_STD, DEFAULT_DIM};

pub(crate) fn reward_for(success: bool) -> f64 {
    if success {
        1.0
    } else {
        -1.0
    }
}
