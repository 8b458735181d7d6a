//! A small deep Q-network built from scratch.

mod dqn;
mod mlp;
mod replay;

pub use dqn::{DqnAgent, DqnConfig, DEFAULT_STEP_SIZE, DEFAULT_SYNC_PERIOD};
pub use mlp::{Gradients, Mlp, DEFAULT_HIDDEN};
pub use replay::{ReplayBuffer, Transition, DEFAULT_CAPACITY};
