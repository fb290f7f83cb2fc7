//! Two-stage pruned Q-learning over vector rewards.
//!
//! Phase 1 learns a vector-valued Q-function across several reward channels
//! and uses it to prune the action set per state; phase 2 trains a plain
//! double Q-learning policy on the sparse main reward, restricted to the
//! pruned actions. The crate also ships the scalar baselines (DQN, CQL,
//! discrete BCQ), a sepsis simulator with vector rewards, an offline
//! transition-dataset pipeline, and offline evaluators (WIS, ΔMR, pruning
//! statistics, survival curves).

pub mod error;
pub mod nn;
pub mod policy;
pub mod qlearn;
pub mod seed;

pub use error::{CoreError, Result};
pub use nn::{DenseNetwork, Matrix};
pub use policy::{WeightPrior, WeightSample, DEFAULT_PARTICLE_COUNT};
pub use qlearn::{ReplayBuffer, TrainerConfig, Transition};
