//! Double Q-learning targets.
//!
//! Action selection always comes from the online network, evaluation from
//! the target network. Terminal transitions never bootstrap.

use crate::error::{CoreError, Result};
use crate::nn::{DenseNetwork, Matrix};

use super::transition::Transition;

/// Argmax with ties broken toward the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Argmax over a permitted subset of actions, ties toward the lowest index.
/// `permitted` must be nonempty.
pub fn argmax_restricted(values: &[f64], permitted: &[usize]) -> usize {
    let mut best = permitted[0];
    for &a in &permitted[1..] {
        if values[a] > values[best] {
            best = a;
        }
    }
    best
}

/// Which scalar reward a trainer extracts from the vector reward.
#[derive(Debug, Clone, PartialEq)]
pub enum RewardView {
    /// Channel 0 only: the sparse main reward.
    MainChannel,
    /// Fixed linear combination of all channels.
    Weighted(Vec<f64>),
}

impl RewardView {
    pub fn reward(&self, t: &Transition) -> f64 {
        match self {
            RewardView::MainChannel => t.main_reward(),
            RewardView::Weighted(w) => w
                .iter()
                .zip(&t.reward_vec)
                .map(|(wi, ri)| wi * ri)
                .sum(),
        }
    }
}

/// Double-Q target for one transition:
/// `r + gamma * Q'(s', argmax_a Q(s', a))`, or `r` alone when terminal.
pub fn dqn_target(
    transition: &Transition,
    q_net: &DenseNetwork,
    target_net: &DenseNetwork,
    gamma: f64,
) -> Result<f64> {
    if q_net.output_dim() != target_net.output_dim() {
        return Err(CoreError::Shape {
            context: "dqn_target",
            expected: format!("{} actions", q_net.output_dim()),
            actual: format!("{} actions", target_net.output_dim()),
        });
    }
    let r = transition.main_reward();
    if transition.terminal {
        return Ok(r);
    }
    let online = q_net.forward_row(&transition.next_state)?;
    let eval = target_net.forward_row(&transition.next_state)?;
    Ok(r + gamma * eval[argmax(&online)])
}

/// Batched double-Q targets with an optional per-transition action
/// restriction on the next-state argmax.
///
/// `restrict` receives the batch index and next state and may return the
/// permitted action set (`None` means all actions).
pub(crate) fn double_q_targets<F>(
    batch: &[&Transition],
    q_net: &DenseNetwork,
    target_net: &DenseNetwork,
    gamma: f64,
    reward_view: &RewardView,
    mut restrict: F,
) -> Result<Vec<f64>>
where
    F: FnMut(usize, &Transition) -> Option<Vec<usize>>,
{
    let next_states =
        Matrix::from_rows(&batch.iter().map(|t| t.next_state.clone()).collect::<Vec<_>>())?;
    let online_next = q_net.forward(&next_states)?;
    let eval_next = target_net.forward(&next_states)?;
    let mut targets = Vec::with_capacity(batch.len());
    for (b, t) in batch.iter().enumerate() {
        let r = reward_view.reward(t);
        if t.terminal {
            targets.push(r);
            continue;
        }
        let q_row = online_next.row(b);
        let chosen = match restrict(b, t) {
            Some(permitted) => argmax_restricted(q_row, &permitted),
            None => argmax(q_row),
        };
        targets.push(r + gamma * eval_next.row(b)[chosen]);
    }
    Ok(targets)
}

/// Linear net over one-hot states acting as a lookup table:
/// `Q(s, a) = table[s][a]`. Test fixture shared across modules.
#[cfg(test)]
pub(crate) fn table_net(table: &[Vec<f64>]) -> DenseNetwork {
    use crate::nn::Layer;
    let n_states = table.len();
    let n_actions = table[0].len();
    let mut data = vec![0.0; n_actions * n_states];
    for (s, row) in table.iter().enumerate() {
        for (a, &v) in row.iter().enumerate() {
            data[a * n_states + s] = v;
        }
    }
    DenseNetwork::from_layers(vec![Layer {
        weights: Matrix::from_vec(n_actions, n_states, data).unwrap(),
        bias: vec![0.0; n_actions],
    }])
    .unwrap()
}
