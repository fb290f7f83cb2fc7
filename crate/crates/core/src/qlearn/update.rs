//! Gradient updates for scalar Q-networks.

use crate::error::{CoreError, Result};
use crate::nn::{adam_step, AdamState, DenseNetwork, Matrix};

use super::cql::cql_penalty_grad;
use super::targets::{double_q_targets, RewardView};
use super::transition::Transition;
use super::{TrainerConfig, GRAD_CLIP_NORM};

/// One Adam step regressing `Q(s, a)` onto precomputed targets, with an
/// optional CQL penalty. Returns the pre-step loss.
pub(crate) fn apply_scalar_update(
    batch: &[&Transition],
    q_net: &mut DenseNetwork,
    adam: &mut AdamState,
    targets: &[f64],
    cql_alpha: f64,
) -> Result<f64> {
    let n = batch.len() as f64;
    let states = Matrix::from_rows(&batch.iter().map(|t| t.state.clone()).collect::<Vec<_>>())?;
    let cache = q_net.forward_cached(&states)?;
    let out = cache.output();

    let mut grad_out = Matrix::zeros(out.rows(), out.cols());
    let mut td_loss = 0.0;
    for (b, t) in batch.iter().enumerate() {
        let pred = out.get(b, t.action);
        let diff = pred - targets[b];
        td_loss += diff * diff;
        grad_out.set(b, t.action, 2.0 * diff / n);
    }
    td_loss /= n;

    let mut penalty = 0.0;
    if cql_alpha > 0.0 {
        for (b, t) in batch.iter().enumerate() {
            penalty += cql_penalty_grad(out.row(b), t.action, cql_alpha / n, grad_out.row_mut(b))?;
        }
        penalty /= n;
    }
    let loss = td_loss + cql_alpha * penalty;

    if !loss.is_finite() {
        let worst = (0..batch.len())
            .max_by(|&a, &b| {
                let da = (out.get(a, batch[a].action) - targets[a]).abs();
                let db = (out.get(b, batch[b].action) - targets[b]).abs();
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        let (lo, hi) = out
            .data()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        return Err(CoreError::NonFinite {
            context: "q_learning_update",
            detail: format!("loss diverged at batch index {worst}; Q range [{lo:.3e}, {hi:.3e}]"),
        });
    }

    let mut grads = q_net.backward_from_cache(&cache, &grad_out)?;
    grads.clip_global_norm(GRAD_CLIP_NORM);
    adam_step(q_net, &grads, adam)?;
    Ok(loss)
}

/// Plain double Q-learning step on the main reward channel.
pub fn q_learning_update(
    batch: &[&Transition],
    q_net: &mut DenseNetwork,
    target_net: &DenseNetwork,
    adam: &mut AdamState,
    config: &TrainerConfig,
) -> Result<f64> {
    if batch.is_empty() {
        return Err(CoreError::InvalidArgument("empty batch".into()));
    }
    let targets = double_q_targets(
        batch,
        q_net,
        target_net,
        config.gamma,
        &RewardView::MainChannel,
        |_, _| None,
    )?;
    apply_scalar_update(batch, q_net, adam, &targets, 0.0)
}

/// Conservative Q-learning step: TD loss plus `alpha` times the penalty
/// `logsumexp(Q(s, ·)) − Q(s, a)`.
pub fn cql_update(
    batch: &[&Transition],
    q_net: &mut DenseNetwork,
    target_net: &DenseNetwork,
    adam: &mut AdamState,
    config: &TrainerConfig,
    alpha: f64,
) -> Result<f64> {
    if batch.is_empty() {
        return Err(CoreError::InvalidArgument("empty batch".into()));
    }
    if alpha < 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "cql alpha must be nonnegative, got {alpha}"
        )));
    }
    let targets = double_q_targets(
        batch,
        q_net,
        target_net,
        config.gamma,
        &RewardView::MainChannel,
        |_, _| None,
    )?;
    apply_scalar_update(batch, q_net, adam, &targets, alpha)
}

/// Double Q-learning on a fixed linear scalarization of the reward vector.
/// This is the "Q-learning with intermediate rewards" baseline.
pub fn weighted_q_update(
    batch: &[&Transition],
    q_net: &mut DenseNetwork,
    target_net: &DenseNetwork,
    adam: &mut AdamState,
    config: &TrainerConfig,
    weights: &[f64],
) -> Result<f64> {
    if batch.is_empty() {
        return Err(CoreError::InvalidArgument("empty batch".into()));
    }
    let view = RewardView::Weighted(weights.to_vec());
    let targets = double_q_targets(batch, q_net, target_net, config.gamma, &view, |_, _| None)?;
    apply_scalar_update(batch, q_net, adam, &targets, 0.0)
}
