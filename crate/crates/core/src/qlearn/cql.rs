//! The conservative Q-learning penalty.

use crate::error::{CoreError, Result};

/// Numerically stable `log(sum(exp(values)))`.
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `logsumexp(Q(s, ·)) − Q(s, a)`: large when the taken action looks
/// unremarkable next to the rest of the action set, near zero when it
/// dominates. Penalizing it pushes down out-of-distribution actions.
pub fn cql_penalty(q_values_for_state: &[f64], taken_action: usize) -> Result<f64> {
    if taken_action >= q_values_for_state.len() {
        return Err(CoreError::InvalidArgument(format!(
            "action {taken_action} out of range for {} actions",
            q_values_for_state.len()
        )));
    }
    if let Some(bad) = q_values_for_state.iter().find(|v| !v.is_finite()) {
        return Err(CoreError::NonFinite {
            context: "cql_penalty",
            detail: format!("Q-value {bad}"),
        });
    }
    Ok(logsumexp(q_values_for_state) - q_values_for_state[taken_action])
}

/// Adds `scale * d(penalty)/dQ` into `grad_row` and returns the penalty.
/// The gradient is `softmax(Q)(a) − 1{a = taken}` per action.
pub(crate) fn cql_penalty_grad(
    q_row: &[f64],
    taken_action: usize,
    scale: f64,
    grad_row: &mut [f64],
) -> Result<f64> {
    let penalty = cql_penalty(q_row, taken_action)?;
    let max = q_row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = q_row.iter().map(|v| (v - max).exp()).sum();
    for (a, g) in grad_row.iter_mut().enumerate() {
        let softmax = (q_row[a] - max).exp() / sum;
        let indicator = if a == taken_action { 1.0 } else { 0.0 };
        *g += scale * (softmax - indicator);
    }
    Ok(penalty)
}
