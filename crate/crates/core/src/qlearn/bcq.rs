//! Discrete batch-constrained Q-learning.
//!
//! BCQ restricts the next-state argmax to actions whose estimated behavior
//! probability, relative to the most likely action, exceeds a threshold.

use crate::error::{CoreError, Result};
use crate::nn::{AdamState, DenseNetwork};
use crate::policy::ActionProbs;

use super::targets::{double_q_targets, RewardView};
use super::transition::Transition;
use super::update::apply_scalar_update;
use super::TrainerConfig;

/// Actions permitted under behavior probabilities `probs` at threshold `t`:
/// `a` stays iff `probs[a] / max_b probs[b] > t`. The argmax action always
/// stays.
pub fn bcq_mask(behavior_probs: &[f64], threshold: f64) -> Result<Vec<usize>> {
    if behavior_probs.is_empty() {
        return Err(CoreError::InvalidArgument("empty probability vector".into()));
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(CoreError::InvalidArgument(format!(
            "threshold must lie in [0, 1], got {threshold}"
        )));
    }
    let max = behavior_probs
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) || !max.is_finite() {
        return Err(CoreError::InvalidArgument(
            "behavior probabilities must contain a positive maximum".into(),
        ));
    }
    let mut permitted: Vec<usize> = behavior_probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p / max > threshold || p == max)
        .map(|(a, _)| a)
        .collect();
    if permitted.is_empty() {
        // Unreachable given p == max is always kept; makes the invariant local.
        permitted.push(super::targets::argmax(behavior_probs));
    }
    Ok(permitted)
}

/// Double-Q step whose next-state argmax ranges only over BCQ-permitted
/// actions under the fitted behavior model.
pub fn bcq_update(
    batch: &[&Transition],
    q_net: &mut DenseNetwork,
    target_net: &DenseNetwork,
    behavior: &dyn ActionProbs,
    adam: &mut AdamState,
    config: &TrainerConfig,
    threshold: f64,
) -> Result<f64> {
    if batch.is_empty() {
        return Err(CoreError::InvalidArgument("empty batch".into()));
    }
    let mut masks = Vec::with_capacity(batch.len());
    for t in batch {
        if t.terminal {
            masks.push(None);
        } else {
            let probs = behavior.action_probs(&t.next_state)?;
            masks.push(Some(bcq_mask(&probs, threshold)?));
        }
    }
    let targets = double_q_targets(
        batch,
        q_net,
        target_net,
        config.gamma,
        &RewardView::MainChannel,
        |b, _| masks[b].clone(),
    )?;
    apply_scalar_update(batch, q_net, adam, &targets, 0.0)
}
