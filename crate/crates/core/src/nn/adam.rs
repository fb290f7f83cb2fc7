//! Adam optimizer state and update step.

use crate::error::{CoreError, Result};

use super::matrix::Matrix;
use super::network::{DenseNetwork, Gradients, Layer};

pub const DEFAULT_BETA1: f64 = 0.9;
pub const DEFAULT_BETA2: f64 = 0.999;
pub const DEFAULT_EPSILON: f64 = 1e-8;

/// Moment accumulators shaped like the network parameters, plus the step
/// counter used for bias correction.
#[derive(Debug, Clone)]
pub struct AdamState {
    first_moment: Vec<Layer>,
    second_moment: Vec<Layer>,
    step: u64,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(net: &DenseNetwork, learning_rate: f64) -> Self {
        let zeros = || {
            net.layers()
                .iter()
                .map(|l| Layer {
                    weights: Matrix::zeros(l.out_dim(), l.in_dim()),
                    bias: vec![0.0; l.out_dim()],
                })
                .collect::<Vec<_>>()
        };
        Self {
            first_moment: zeros(),
            second_moment: zeros(),
            step: 0,
            learning_rate,
            beta1: DEFAULT_BETA1,
            beta2: DEFAULT_BETA2,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

/// One Adam update on every parameter of `net`.
///
/// Rejects gradients containing NaN or infinity, naming the offending layer.
pub fn adam_step(net: &mut DenseNetwork, grads: &Gradients, state: &mut AdamState) -> Result<()> {
    if grads.layers.len() != net.layers().len() {
        return Err(CoreError::Shape {
            context: "adam_step",
            expected: format!("{} gradient layers", net.layers().len()),
            actual: format!("{}", grads.layers.len()),
        });
    }
    for (idx, (layer, grad)) in net.layers().iter().zip(&grads.layers).enumerate() {
        if layer.in_dim() != grad.in_dim() || layer.out_dim() != grad.out_dim() {
            return Err(CoreError::Shape {
                context: "adam_step",
                expected: format!("layer {idx}: {}x{}", layer.out_dim(), layer.in_dim()),
                actual: format!("{}x{}", grad.out_dim(), grad.in_dim()),
            });
        }
        let finite = grad.weights.is_finite() && grad.bias.iter().all(|g| g.is_finite());
        if !finite {
            return Err(CoreError::NonFinite {
                context: "adam_step",
                detail: format!("gradient of layer {idx}"),
            });
        }
    }

    state.step += 1;
    let t = state.step as i32;
    let bias1 = 1.0 - state.beta1.powi(t);
    let bias2 = 1.0 - state.beta2.powi(t);
    let lr = state.learning_rate;
    let (b1, b2, eps) = (state.beta1, state.beta2, state.epsilon);

    let update = |param: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let m_hat = *m / bias1;
        let v_hat = *v / bias2;
        *param -= lr * m_hat / (v_hat.sqrt() + eps);
    };

    for (k, layer) in net.layers_mut().iter_mut().enumerate() {
        let grad = &grads.layers[k];
        let m_layer = &mut state.first_moment[k];
        let v_layer = &mut state.second_moment[k];
        for (((p, &g), m), v) in layer
            .weights
            .data_mut()
            .iter_mut()
            .zip(grad.weights.data())
            .zip(m_layer.weights.data_mut())
            .zip(v_layer.weights.data_mut())
        {
            update(p, g, m, v);
        }
        for (((p, &g), m), v) in layer
            .bias
            .iter_mut()
            .zip(&grad.bias)
            .zip(m_layer.bias.iter_mut())
            .zip(v_layer.bias.iter_mut())
        {
            update(p, g, m, v);
        }
    }
    Ok(())
}
