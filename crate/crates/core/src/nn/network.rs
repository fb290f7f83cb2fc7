//! Dense multilayer perceptron: ReLU hidden layers, identity output.
//!
//! Networks are plain values. Training mutates them through [`adam_step`];
//! nothing here keeps interior mutability or locks, so a network can be
//! handed to another thread freely.
//!
//! [`adam_step`]: super::adam::adam_step

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

use super::matrix::Matrix;

/// Default hidden widths for the Q-networks: two ReLU layers of 64 units
/// in front of the linear output layer.
pub const DEFAULT_HIDDEN: [usize; 2] = [64, 64];

/// One affine layer. Weights are `[out_dim x in_dim]`, row per output unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }
}

/// Parameter gradients, shaped exactly like the network's layers.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub layers: Vec<Layer>,
}

impl Gradients {
    pub fn zeros_like(net: &DenseNetwork) -> Self {
        Self {
            layers: net
                .layers
                .iter()
                .map(|l| Layer {
                    weights: Matrix::zeros(l.out_dim(), l.in_dim()),
                    bias: vec![0.0; l.out_dim()],
                })
                .collect(),
        }
    }

    /// Euclidean norm over every parameter gradient.
    pub fn global_norm(&self) -> f64 {
        let mut sq = 0.0;
        for layer in &self.layers {
            sq += layer.weights.data().iter().map(|g| g * g).sum::<f64>();
            sq += layer.bias.iter().map(|g| g * g).sum::<f64>();
        }
        sq.sqrt()
    }

    /// Scales gradients down so the global norm does not exceed `max_norm`.
    pub fn clip_global_norm(&mut self, max_norm: f64) {
        let norm = self.global_norm();
        if norm > max_norm && norm > 0.0 {
            let scale = max_norm / norm;
            for layer in &mut self.layers {
                for g in layer.weights.data_mut() {
                    *g *= scale;
                }
                for g in &mut layer.bias {
                    *g *= scale;
                }
            }
        }
    }
}

/// Post-activation values from a forward pass, kept for backprop.
///
/// `activations[0]` is the input batch; `activations[k]` is the output of
/// layer `k-1` after its activation.
pub struct ForwardCache {
    pub activations: Vec<Matrix>,
}

impl ForwardCache {
    pub fn output(&self) -> &Matrix {
        self.activations.last().expect("cache has at least input")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseNetwork {
    layers: Vec<Layer>,
}

impl DenseNetwork {
    /// He-style uniform initialization: weights in `±sqrt(6 / fan_in)`, zero bias.
    pub fn new<R: Rng + ?Sized>(
        input_dim: usize,
        hidden_dims: &[usize],
        output_dim: usize,
        rng: &mut R,
    ) -> Self {
        let mut layers = Vec::with_capacity(hidden_dims.len() + 1);
        let mut in_dim = input_dim;
        for &out_dim in hidden_dims.iter().chain(std::iter::once(&output_dim)) {
            let limit = (6.0 / in_dim as f64).sqrt();
            let data: Vec<f64> = (0..in_dim * out_dim)
                .map(|_| rng.random_range(-limit..limit))
                .collect();
            layers.push(Layer {
                weights: Matrix::from_vec(out_dim, in_dim, data).expect("sized by construction"),
                bias: vec![0.0; out_dim],
            });
            in_dim = out_dim;
        }
        Self { layers }
    }

    /// All-zero parameters with the given architecture.
    pub fn zeros(input_dim: usize, hidden_dims: &[usize], output_dim: usize) -> Self {
        let mut layers = Vec::with_capacity(hidden_dims.len() + 1);
        let mut in_dim = input_dim;
        for &out_dim in hidden_dims.iter().chain(std::iter::once(&output_dim)) {
            layers.push(Layer {
                weights: Matrix::zeros(out_dim, in_dim),
                bias: vec![0.0; out_dim],
            });
            in_dim = out_dim;
        }
        Self { layers }
    }

    /// Builds a network directly from layers. Dimensions must chain.
    pub fn from_layers(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(CoreError::InvalidArgument(
                "network needs at least one layer".into(),
            ));
        }
        for pair in layers.windows(2) {
            if pair[0].out_dim() != pair[1].in_dim() {
                return Err(CoreError::Shape {
                    context: "DenseNetwork::from_layers",
                    expected: format!("layer input {}", pair[0].out_dim()),
                    actual: format!("layer input {}", pair[1].in_dim()),
                });
            }
        }
        for layer in &layers {
            if layer.bias.len() != layer.out_dim() {
                return Err(CoreError::Shape {
                    context: "DenseNetwork::from_layers",
                    expected: format!("bias length {}", layer.out_dim()),
                    actual: format!("bias length {}", layer.bias.len()),
                });
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("nonempty").out_dim()
    }

    pub fn same_architecture(&self, other: &DenseNetwork) -> bool {
        self.layers.len() == other.layers.len()
            && self
                .layers
                .iter()
                .zip(&other.layers)
                .all(|(a, b)| a.in_dim() == b.in_dim() && a.out_dim() == b.out_dim())
    }

    fn check_input(&self, states: &Matrix, context: &'static str) -> Result<()> {
        if states.cols() != self.input_dim() {
            return Err(CoreError::Shape {
                context,
                expected: format!("{} input columns", self.input_dim()),
                actual: format!("{} columns", states.cols()),
            });
        }
        Ok(())
    }

    /// Batched forward pass: one row per state.
    pub fn forward(&self, states: &Matrix) -> Result<Matrix> {
        Ok(self.forward_cached(states)?.activations.pop_unchecked())
    }

    /// Forward pass keeping every post-activation for a later backward pass.
    pub fn forward_cached(&self, states: &Matrix) -> Result<ForwardCache> {
        self.check_input(states, "DenseNetwork::forward")?;
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(states.clone());
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            let mut z = activations[k].matmul_nt(&layer.weights)?;
            for r in 0..z.rows() {
                let row = z.row_mut(r);
                for (v, b) in row.iter_mut().zip(&layer.bias) {
                    *v += b;
                }
                if k != last {
                    for v in row.iter_mut() {
                        if *v < 0.0 {
                            *v = 0.0;
                        }
                    }
                }
            }
            activations.push(z);
        }
        Ok(ForwardCache { activations })
    }

    /// Single-state convenience wrapper around [`forward`](Self::forward).
    pub fn forward_row(&self, state: &[f64]) -> Result<Vec<f64>> {
        let out = self.forward(&Matrix::from_row(state))?;
        Ok(out.row(0).to_vec())
    }

    /// Gradients of a scalar loss with respect to all parameters, given
    /// `output_gradient = dL/d(output)` for the batch in `states`.
    pub fn backward(&self, states: &Matrix, output_gradient: &Matrix) -> Result<Gradients> {
        let cache = self.forward_cached(states)?;
        self.backward_from_cache(&cache, output_gradient)
    }

    /// Backward pass reusing a cache produced by [`forward_cached`](Self::forward_cached).
    pub fn backward_from_cache(
        &self,
        cache: &ForwardCache,
        output_gradient: &Matrix,
    ) -> Result<Gradients> {
        let out = cache.output();
        if output_gradient.rows() != out.rows() || output_gradient.cols() != out.cols() {
            return Err(CoreError::Shape {
                context: "DenseNetwork::backward",
                expected: format!("{}x{}", out.rows(), out.cols()),
                actual: format!("{}x{}", output_gradient.rows(), output_gradient.cols()),
            });
        }
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut delta = output_gradient.clone();
        for (k, layer) in self.layers.iter().enumerate().rev() {
            // Output layer is linear; hidden layers gate the gradient by the
            // ReLU mask (post-activation > 0).
            if k != self.layers.len() - 1 {
                let post = &cache.activations[k + 1];
                for r in 0..delta.rows() {
                    let mask = post.row(r);
                    for (d, &p) in delta.row_mut(r).iter_mut().zip(mask) {
                        if p <= 0.0 {
                            *d = 0.0;
                        }
                    }
                }
            }
            let input = &cache.activations[k];
            let dw = delta.matmul_tn(input)?;
            let mut db = vec![0.0; layer.out_dim()];
            for r in 0..delta.rows() {
                for (b, &d) in db.iter_mut().zip(delta.row(r)) {
                    *b += d;
                }
            }
            if k > 0 {
                delta = delta.matmul(&layer.weights)?;
            }
            grads.push(Layer {
                weights: dw,
                bias: db,
            });
        }
        grads.reverse();
        Ok(Gradients { layers: grads })
    }
}

trait PopUnchecked {
    fn pop_unchecked(&mut self) -> Matrix;
}

impl PopUnchecked for Vec<Matrix> {
    fn pop_unchecked(&mut self) -> Matrix {
        self.pop().expect("forward produces at least one activation")
    }
}

/// Copies all parameters from `src` into `dst`. Architectures must match.
pub fn copy_parameters(src: &DenseNetwork, dst: &mut DenseNetwork) -> Result<()> {
    if !src.same_architecture(dst) {
        return Err(CoreError::Shape {
            context: "copy_parameters",
            expected: "identical architectures".to_string(),
            actual: "mismatched layer dimensions".to_string(),
        });
    }
    dst.layers.clone_from(&src.layers);
    Ok(())
}
