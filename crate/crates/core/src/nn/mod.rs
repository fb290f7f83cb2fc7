//! Minimal dense-network engine: matrices, ReLU MLPs, backprop, Adam, and
//! the checkpoint file format. Everything runs in `f64`.

mod adam;
mod checkpoint;
mod matrix;
mod network;

pub use adam::{adam_step, AdamState, DEFAULT_BETA1, DEFAULT_BETA2, DEFAULT_EPSILON};
pub use checkpoint::{
    checkpoint_id, load_checkpoint, save_checkpoint, Checkpoint, ModelKind, MAGIC,
};
pub use matrix::Matrix;
pub use network::{copy_parameters, DenseNetwork, ForwardCache, Gradients, Layer, DEFAULT_HIDDEN};

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::error::CoreError;

    fn fixed_232_net() -> DenseNetwork {
        // Frozen weights matching the scripted forward-pass oracle.
        DenseNetwork::from_layers(vec![
            Layer {
                weights: Matrix::from_vec(3, 2, vec![0.5, -0.25, 0.8, 0.1, -0.3, 0.7]).unwrap(),
                bias: vec![0.1, 0.15, 0.05],
            },
            Layer {
                weights: Matrix::from_vec(2, 3, vec![1.0, -0.5, 0.25, 0.6, 0.4, -0.8]).unwrap(),
                bias: vec![-0.05, 0.2],
            },
        ])
        .unwrap()
    }

    #[test]
    fn forward_zero_network_gives_zero_output() {
        let net = DenseNetwork::zeros(4, &[8], 3);
        let out = net
            .forward(&Matrix::from_rows(&[vec![1.0, -2.0, 3.0, 0.5]]).unwrap())
            .unwrap();
        assert_eq!(out.data(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn forward_identity_layer_passes_input_through() {
        let net = DenseNetwork::from_layers(vec![Layer {
            weights: Matrix::from_vec(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap(),
            bias: vec![0.0, 0.0],
        }])
        .unwrap();
        let x = vec![3.25, -1.5];
        assert_eq!(net.forward_row(&x).unwrap(), x);
    }

    #[test]
    fn forward_matches_scripted_oracle_on_232_net() {
        let net = fixed_232_net();
        let out = net.forward_row(&[0.3, -0.4]).unwrap();
        assert!((out[0] - 0.125).abs() < 1e-12, "got {}", out[0]);
        assert!((out[1] - 0.55).abs() < 1e-12, "got {}", out[1]);
    }

    #[test]
    fn forward_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let net = DenseNetwork::new(5, &[16, 16], 3, &mut rng);
        let x = Matrix::from_rows(&[vec![0.1, -0.2, 0.3, 0.7, -1.1]]).unwrap();
        let a = net.forward(&x).unwrap();
        let b = net.forward(&x).unwrap();
        assert_eq!(a.data(), b.data());
    }

    #[test]
    fn forward_rejects_wrong_input_width() {
        let net = DenseNetwork::zeros(4, &[8], 3);
        let err = net.forward(&Matrix::zeros(1, 5)).unwrap_err();
        assert!(matches!(err, CoreError::Shape { .. }));
    }

    #[test]
    fn backward_zero_output_gradient_gives_zero_parameter_gradients() {
        let net = fixed_232_net();
        let x = Matrix::from_rows(&[vec![0.3, -0.4]]).unwrap();
        let grads = net.backward(&x, &Matrix::zeros(1, 2)).unwrap();
        for layer in &grads.layers {
            assert!(layer.weights.data().iter().all(|&g| g == 0.0));
            assert!(layer.bias.iter().all(|&g| g == 0.0));
        }
    }

    #[test]
    fn backward_scalar_linear_net_gradient_is_input() {
        // f(x) = w * x with w = 2; dL/dw for L = f is x.
        let net = DenseNetwork::from_layers(vec![Layer {
            weights: Matrix::from_vec(1, 1, vec![2.0]).unwrap(),
            bias: vec![0.0],
        }])
        .unwrap();
        let x = Matrix::from_rows(&[vec![1.7]]).unwrap();
        let grads = net.backward(&x, &Matrix::from_rows(&[vec![1.0]]).unwrap()).unwrap();
        assert!((grads.layers[0].weights.get(0, 0) - 1.7).abs() < 1e-15);
        assert!((grads.layers[0].bias[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn backward_rejects_wrong_gradient_shape() {
        let net = fixed_232_net();
        let x = Matrix::from_rows(&[vec![0.3, -0.4]]).unwrap();
        assert!(net.backward(&x, &Matrix::zeros(1, 3)).is_err());
    }

    /// Central finite differences over every parameter of a small random net.
    fn finite_difference_check(seed: u64) -> (f64, usize, usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = DenseNetwork::new(4, &[6, 5], 3, &mut rng);
        let batch = Matrix::from_rows(
            &(0..8)
                .map(|_| (0..4).map(|_| rng.random_range(-1.5..1.5)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let targets = Matrix::from_rows(
            &(0..8)
                .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap();

        let loss = |n: &DenseNetwork| -> f64 {
            let out = n.forward(&batch).unwrap();
            out.data()
                .iter()
                .zip(targets.data())
                .map(|(o, t)| (o - t) * (o - t))
                .sum::<f64>()
        };

        // dL/d(out) = 2 (out - target)
        let out = net.forward(&batch).unwrap();
        let grad_out = Matrix::from_vec(
            out.rows(),
            out.cols(),
            out.data()
                .iter()
                .zip(targets.data())
                .map(|(o, t)| 2.0 * (o - t))
                .collect(),
        )
        .unwrap();
        let analytic = net.backward(&batch, &grad_out).unwrap();

        let h = 1e-5;
        let mut worst = 0.0_f64;
        let mut bad = 0usize;
        let mut total = 0usize;
        for k in 0..net.layers().len() {
            let n_weights = net.layers()[k].weights.data().len();
            let n_bias = net.layers()[k].bias.len();
            for idx in 0..n_weights + n_bias {
                let mut plus = net.clone();
                let mut minus = net.clone();
                {
                    let (p, m) = (&mut plus.layers_mut()[k], &mut minus.layers_mut()[k]);
                    if idx < n_weights {
                        p.weights.data_mut()[idx] += h;
                        m.weights.data_mut()[idx] -= h;
                    } else {
                        p.bias[idx - n_weights] += h;
                        m.bias[idx - n_weights] -= h;
                    }
                }
                let numeric = (loss(&plus) - loss(&minus)) / (2.0 * h);
                let a = if idx < n_weights {
                    analytic.layers[k].weights.data()[idx]
                } else {
                    analytic.layers[k].bias[idx - n_weights]
                };
                let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1.0);
                worst = worst.max(rel);
                if rel >= 1e-4 {
                    bad += 1;
                }
                total += 1;
            }
        }
        (worst, bad, total)
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        for seed in 0..5 {
            let (worst, bad, total) = finite_difference_check(seed);
            assert!(
                bad == 0,
                "seed {seed}: {bad}/{total} coordinates off, worst rel err {worst:.2e}"
            );
        }
    }

    #[test]
    fn adam_zero_gradient_leaves_parameters_unchanged() {
        let net0 = fixed_232_net();
        let mut net = net0.clone();
        let mut state = AdamState::new(&net, 0.1);
        let grads = Gradients::zeros_like(&net);
        adam_step(&mut net, &grads, &mut state).unwrap();
        assert_eq!(net, net0);
        assert_eq!(state.step_count(), 1);
    }

    #[test]
    fn adam_first_step_moves_by_learning_rate() {
        // Scalar parameter at 0, gradient 1, lr 0.1: bias-corrected first
        // step lands at -lr / (1 + eps) which is -0.1 to 7 decimals.
        let mut net = DenseNetwork::zeros(1, &[], 1);
        let mut state = AdamState::new(&net, 0.1);
        let mut grads = Gradients::zeros_like(&net);
        grads.layers[0].weights.set(0, 0, 1.0);
        adam_step(&mut net, &grads, &mut state).unwrap();
        let p = net.layers()[0].weights.get(0, 0);
        assert!((p + 0.09999999900000009).abs() < 1e-12, "got {p}");
    }

    #[test]
    fn adam_steps_shrink_quadratic_loss() {
        // L(p) = (p - 3)^2, starting at 0.
        let mut net = DenseNetwork::zeros(1, &[], 1);
        net.layers_mut()[0].weights.set(0, 0, 0.0);
        let mut state = AdamState::new(&net, 0.05);
        let loss = |p: f64| (p - 3.0) * (p - 3.0);
        let mut prev = loss(0.0);
        for _ in 0..2 {
            let p = net.layers()[0].weights.get(0, 0);
            let mut grads = Gradients::zeros_like(&net);
            grads.layers[0].weights.set(0, 0, 2.0 * (p - 3.0));
            adam_step(&mut net, &grads, &mut state).unwrap();
            let now = loss(net.layers()[0].weights.get(0, 0));
            assert!(now < prev, "loss rose: {prev} -> {now}");
            prev = now;
        }
    }

    #[test]
    fn adam_rejects_non_finite_gradient_with_layer_index() {
        let mut net = fixed_232_net();
        let mut state = AdamState::new(&net, 0.1);
        let mut grads = Gradients::zeros_like(&net);
        grads.layers[1].bias[0] = f64::NAN;
        let err = adam_step(&mut net, &grads, &mut state).unwrap_err();
        match err {
            CoreError::NonFinite { detail, .. } => assert!(detail.contains("layer 1")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn copy_parameters_makes_outputs_identical_and_isolated() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let src = DenseNetwork::new(3, &[4], 2, &mut rng);
        let mut dst = DenseNetwork::new(3, &[4], 2, &mut rng);
        copy_parameters(&src, &mut dst).unwrap();
        let x = vec![0.4, -0.9, 1.2];
        assert_eq!(src.forward_row(&x).unwrap(), dst.forward_row(&x).unwrap());

        // Mutating the source must not leak into the copy.
        let mut src2 = src.clone();
        src2.layers_mut()[0].weights.set(0, 0, 99.0);
        assert_eq!(src.forward_row(&x).unwrap(), dst.forward_row(&x).unwrap());

        // Idempotent.
        let snapshot = dst.clone();
        copy_parameters(&src, &mut dst).unwrap();
        assert_eq!(snapshot, dst);
    }

    #[test]
    fn copy_parameters_rejects_architecture_mismatch() {
        let src = DenseNetwork::zeros(3, &[4], 2);
        let mut dst = DenseNetwork::zeros(3, &[5], 2);
        assert!(copy_parameters(&src, &mut dst).is_err());
    }

    #[test]
    fn gradient_clipping_bounds_global_norm() {
        let net = DenseNetwork::zeros(2, &[], 2);
        let mut grads = Gradients::zeros_like(&net);
        for (i, g) in grads.layers[0].weights.data_mut().iter_mut().enumerate() {
            *g = (i as f64 + 1.0) * 10.0;
        }
        grads.clip_global_norm(1.0);
        assert!((grads.global_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let net = DenseNetwork::new(7, &[9, 5], 4, &mut rng);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.ckpt");
        let ckpt = Checkpoint {
            kind: ModelKind::DenseQ,
            net,
            extra: vec![],
        };
        save_checkpoint(&path, &ckpt).unwrap();
        let loaded = load_checkpoint(&path).unwrap();
        assert_eq!(ckpt, loaded);

        // Same bytes when saved again.
        let path2 = dir.path().join("net2.ckpt");
        save_checkpoint(&path2, &loaded).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&path2).unwrap());
    }

    #[test]
    fn checkpoint_vector_kind_keeps_extra_dims() {
        let net = DenseNetwork::zeros(4, &[6], 10);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vq.ckpt");
        let ckpt = Checkpoint {
            kind: ModelKind::VectorQ,
            net,
            extra: vec![5, 2],
        };
        save_checkpoint(&path, &ckpt).unwrap();
        let loaded = load_checkpoint(&path).unwrap();
        assert_eq!(loaded.kind, ModelKind::VectorQ);
        assert_eq!(loaded.extra, vec![5, 2]);
    }

    #[test]
    fn checkpoint_rejects_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.ckpt");
        std::fs::write(&path, b"NOTAMAGIC").unwrap();
        assert!(load_checkpoint(&path).is_err());
    }
}
