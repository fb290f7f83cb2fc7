//! Softmax and softened policies over discrete actions, plus the Dirichlet
//! prior over reward weightings and its posterior sampler.

mod weights;

pub use weights::{
    posterior_sample_weight, sample_weight, PosteriorDraw, WeightPrior, WeightSample,
    DEFAULT_PARTICLE_COUNT,
};

use rand::{Rng, RngCore};

use crate::error::{CoreError, Result};

/// A deterministic mapping from states to actions.
pub trait DeterministicPolicy {
    fn action(&self, state: &[f64]) -> Result<usize>;
}

/// A policy that may randomize; used for rollouts and data generation.
pub trait StochasticPolicy {
    fn act(&self, state: &[f64], rng: &mut dyn RngCore) -> Result<usize>;
}

impl<T: DeterministicPolicy> StochasticPolicy for T {
    fn act(&self, state: &[f64], _rng: &mut dyn RngCore) -> Result<usize> {
        self.action(state)
    }
}

/// Anything that yields a full action distribution per state: behavior
/// models, softened policies.
pub trait ActionProbs {
    fn action_probs(&self, state: &[f64]) -> Result<Vec<f64>>;
}

/// Samples an action index from a probability vector.
pub fn sample_action(probs: &[f64], rng: &mut dyn RngCore) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.random_range(0.0..total);
    for (a, &p) in probs.iter().enumerate() {
        if u < p {
            return a;
        }
        u -= p;
    }
    probs.len() - 1
}

/// Boltzmann probabilities `p_a ∝ exp(beta * q_a)`, computed with
/// max-subtraction so large `beta * q` cannot overflow.
pub fn softmax_probs(q_values: &[f64], beta: f64) -> Result<Vec<f64>> {
    if q_values.is_empty() {
        return Err(CoreError::InvalidArgument("empty Q-value vector".into()));
    }
    if !beta.is_finite() || beta <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "inverse temperature must be positive and finite, got {beta}"
        )));
    }
    if let Some(bad) = q_values.iter().find(|v| !v.is_finite()) {
        return Err(CoreError::NonFinite {
            context: "softmax_probs",
            detail: format!("Q-value {bad}"),
        });
    }
    let max = q_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = q_values.iter().map(|&q| (beta * (q - max)).exp()).collect();
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    Ok(probs)
}

/// Probability-weighted mean of the Q-values under the softmax policy.
///
/// Converges to `max(q_values)` as `beta` grows and never exceeds it.
pub fn softmax_value(q_values: &[f64], beta: f64) -> Result<f64> {
    let probs = softmax_probs(q_values, beta)?;
    Ok(probs.iter().zip(q_values).map(|(p, q)| p * q).sum())
}

/// Spreads `epsilon` of a deterministic policy's mass uniformly over the
/// non-chosen actions: the chosen action keeps `1 - epsilon`, every other
/// action gets `epsilon / (|A| - 1)`.
pub fn soften(chosen_action: usize, epsilon: f64, action_count: usize) -> Result<Vec<f64>> {
    if action_count < 2 {
        return Err(CoreError::InvalidArgument(format!(
            "softening needs at least 2 actions, got {action_count}"
        )));
    }
    if !(0.0..1.0).contains(&epsilon) || epsilon <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if chosen_action >= action_count {
        return Err(CoreError::InvalidArgument(format!(
            "chosen action {chosen_action} out of range for {action_count} actions"
        )));
    }
    let off = epsilon / (action_count - 1) as f64;
    let mut probs = vec![off; action_count];
    probs[chosen_action] = 1.0 - epsilon;
    Ok(probs)
}
