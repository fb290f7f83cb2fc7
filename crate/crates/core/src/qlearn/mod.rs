//! Scalar-reward Q-learning: replay, double-Q targets, DQN/CQL/BCQ updates,
//! and a tabular path for oracle checks.

mod bcq;
mod config;
mod cql;
mod replay;
mod tabular;
mod targets;
mod transition;
mod update;

pub use bcq::{bcq_mask, bcq_update};
pub use config::TrainerConfig;
pub use cql::{cql_penalty, logsumexp};
pub use replay::ReplayBuffer;
pub use tabular::{tabular_double_q_update, TabularQ};
pub use targets::{argmax, argmax_restricted, dqn_target, RewardView};
pub use transition::Transition;
pub use update::{cql_update, q_learning_update, weighted_q_update};

pub(crate) use targets::double_q_targets;
pub(crate) use update::apply_scalar_update;

/// Global-norm gradient clip applied by every network update. Undiscounted
/// returns reach magnitude ~100 here, which sparse batches turn into large
/// occasional gradients.
pub const GRAD_CLIP_NORM: f64 = 10.0;
