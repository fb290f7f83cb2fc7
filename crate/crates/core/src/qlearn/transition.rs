//! The basic unit of experience: one environment step.

use serde::{Deserialize, Serialize};

/// One environment step. `reward_vec[0]` is the sparse main reward; any
/// further channels carry intermediate signals.
///
/// Field names are shortened on the wire to match the dataset file format:
/// `{"traj":..,"step":..,"s":[..],"a":..,"s2":[..],"r":[..],"terminal":..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    #[serde(rename = "traj")]
    pub trajectory_id: u64,
    #[serde(rename = "step")]
    pub step_index: usize,
    #[serde(rename = "s")]
    pub state: Vec<f64>,
    #[serde(rename = "a")]
    pub action: usize,
    #[serde(rename = "s2")]
    pub next_state: Vec<f64>,
    #[serde(rename = "r")]
    pub reward_vec: Vec<f64>,
    pub terminal: bool,
}

impl Transition {
    pub fn main_reward(&self) -> f64 {
        self.reward_vec[0]
    }

    pub fn channel_count(&self) -> usize {
        self.reward_vec.len()
    }
}
