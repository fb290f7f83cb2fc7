//! Shared trainer hyperparameters.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainerConfig {
    /// Discount factor. The sepsis experiments run undiscounted.
    pub gamma: f64,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Updates between target-network copies.
    pub target_update_period: usize,
    pub total_updates: usize,
    /// Conservative penalty weight; 0 disables the penalty.
    pub cql_alpha: f64,
    /// Softmax inverse temperature (phase-1 targets and pruning).
    pub beta: f64,
    pub seed: u64,
    /// Hidden widths of the Q-networks.
    pub hidden_dims: Vec<usize>,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            batch_size: 256,
            learning_rate: 1e-4,
            target_update_period: 10_000,
            total_updates: 100_000,
            cql_alpha: 0.0,
            beta: 40.0,
            seed: 0,
            hidden_dims: crate::nn::DEFAULT_HIDDEN.to_vec(),
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(CoreError::InvalidArgument(format!(
                "gamma must lie in [0, 1], got {}",
                self.gamma
            )));
        }
        if self.target_update_period == 0 {
            return Err(CoreError::InvalidArgument(
                "target_update_period must be at least 1".into(),
            ));
        }
        if self.batch_size == 0 {
            return Err(CoreError::InvalidArgument("batch_size must be positive".into()));
        }
        if self.cql_alpha < 0.0 {
            return Err(CoreError::InvalidArgument(format!(
                "cql_alpha must be nonnegative, got {}",
                self.cql_alpha
            )));
        }
        if self.beta <= 0.0 {
            return Err(CoreError::InvalidArgument(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        Ok(())
    }
}
