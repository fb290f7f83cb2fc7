//! Tabular double Q-learning: the network-free path used by convergence
//! checks and small-MDP oracles. States are index-valued (`state[0]` holds
//! the state index).

use crate::error::{CoreError, Result};
use crate::nn::Matrix;

use super::targets::argmax;
use super::transition::Transition;

#[derive(Debug, Clone, PartialEq)]
pub struct TabularQ {
    values: Matrix,
}

impl TabularQ {
    pub fn zeros(n_states: usize, n_actions: usize) -> Self {
        Self {
            values: Matrix::zeros(n_states, n_actions),
        }
    }

    pub fn n_states(&self) -> usize {
        self.values.rows()
    }

    pub fn n_actions(&self) -> usize {
        self.values.cols()
    }

    pub fn q_row(&self, state: usize) -> &[f64] {
        self.values.row(state)
    }

    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.values.get(state, action)
    }

    pub fn set(&mut self, state: usize, action: usize, v: f64) {
        self.values.set(state, action, v);
    }

    /// Largest absolute difference to another table.
    pub fn sup_distance(&self, other: &TabularQ) -> f64 {
        self.values
            .data()
            .iter()
            .zip(other.values.data())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn state_index(t: &Transition) -> Result<usize> {
        let raw = *t.state.first().ok_or_else(|| {
            CoreError::InvalidArgument("tabular transition has empty state".into())
        })?;
        Ok(raw as usize)
    }

    fn next_state_index(t: &Transition) -> usize {
        t.next_state[0] as usize
    }
}

/// SGD step of double Q-learning on a table:
/// `Q[s,a] += lr * (r + gamma * Q'[s', argmax_a Q[s', a]] - Q[s,a])`.
/// Returns the mean squared TD error before the step.
pub fn tabular_double_q_update(
    batch: &[&Transition],
    q: &mut TabularQ,
    target: &TabularQ,
    learning_rate: f64,
    gamma: f64,
) -> Result<f64> {
    if batch.is_empty() {
        return Err(CoreError::InvalidArgument("empty batch".into()));
    }
    let mut loss = 0.0;
    for t in batch {
        let s = TabularQ::state_index(t)?;
        let y = if t.terminal {
            t.main_reward()
        } else {
            let s2 = TabularQ::next_state_index(t);
            let a_star = argmax(q.q_row(s2));
            t.main_reward() + gamma * target.get(s2, a_star)
        };
        let diff = q.get(s, t.action) - y;
        loss += diff * diff;
        q.set(s, t.action, q.get(s, t.action) - learning_rate * diff);
    }
    Ok(loss / batch.len() as f64)
}
