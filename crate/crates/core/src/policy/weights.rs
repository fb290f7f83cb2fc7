//! Dirichlet prior over reward weightings and posterior sampling of a
//! weight vector at a state-action pair.
//!
//! The posterior is `P(w | s, a) ∝ P(w) · π^β(a | s; wᵀQ)`. We draw from it
//! with one iteration of particle filtering: sample particles from the
//! prior, weight each by the softmax likelihood of the observed action,
//! normalize, and resample a single particle.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::nn::Matrix;

use super::softmax_probs;

/// Default particle count for the single-iteration particle filter.
pub const DEFAULT_PARTICLE_COUNT: usize = 32;

/// Dirichlet prior over the weight simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightPrior {
    concentration: Vec<f64>,
}

impl WeightPrior {
    pub fn new(concentration: Vec<f64>) -> Result<Self> {
        if concentration.is_empty() {
            return Err(CoreError::InvalidArgument(
                "Dirichlet prior needs at least one concentration".into(),
            ));
        }
        if let Some(bad) = concentration.iter().find(|&&a| !(a > 0.0) || !a.is_finite()) {
            return Err(CoreError::InvalidArgument(format!(
                "Dirichlet concentrations must be positive and finite, got {bad}"
            )));
        }
        Ok(Self { concentration })
    }

    /// The prior used in the sepsis experiments: concentration 1 on the main
    /// reward channel and 10 on every intermediate channel.
    pub fn main_plus_intermediate(channel_count: usize, intermediate: f64) -> Result<Self> {
        let mut conc = vec![intermediate; channel_count];
        conc[0] = 1.0;
        Self::new(conc)
    }

    pub fn concentration(&self) -> &[f64] {
        &self.concentration
    }

    pub fn channel_count(&self) -> usize {
        self.concentration.len()
    }
}

/// A weight vector on the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSample {
    w: Vec<f64>,
}

impl WeightSample {
    pub fn values(&self) -> &[f64] {
        &self.w
    }

    /// Scalarizes one row of per-channel Q-values: `wᵀq`.
    pub fn scalarize(&self, channel_values: &[f64]) -> f64 {
        self.w
            .iter()
            .zip(channel_values)
            .map(|(w, q)| w * q)
            .sum()
    }
}

/// One Dirichlet draw via normalized Gamma variates.
pub fn sample_weight<R: Rng + ?Sized>(prior: &WeightPrior, rng: &mut R) -> WeightSample {
    let d = prior.channel_count();
    if d == 1 {
        return WeightSample { w: vec![1.0] };
    }
    loop {
        let mut draws = Vec::with_capacity(d);
        for &alpha in &prior.concentration {
            let gamma = Gamma::new(alpha, 1.0).expect("positive shape checked at construction");
            draws.push(gamma.sample(rng));
        }
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 && sum.is_finite() {
            for v in &mut draws {
                *v /= sum;
            }
            return WeightSample { w: draws };
        }
        // All-zero draws only happen for extreme concentrations; retry.
    }
}

/// Result of a posterior draw, noting whether the sampler had to fall back
/// to the prior because every particle had zero likelihood.
#[derive(Debug, Clone)]
pub struct PosteriorDraw {
    pub sample: WeightSample,
    pub used_fallback: bool,
}

/// Draws a reward weighting from `P(w | s, a) ∝ P(w) · π^β(a | s; wᵀQ)`.
///
/// `q_matrix` holds the vector Q-values at the state, one row per action,
/// one column per reward channel.
pub fn posterior_sample_weight<R: Rng + ?Sized>(
    prior: &WeightPrior,
    q_matrix: &Matrix,
    action: usize,
    beta: f64,
    particle_count: usize,
    rng: &mut R,
) -> Result<PosteriorDraw> {
    if particle_count == 0 {
        return Err(CoreError::InvalidArgument(
            "particle_count must be at least 1".into(),
        ));
    }
    if action >= q_matrix.rows() {
        return Err(CoreError::InvalidArgument(format!(
            "action {action} out of range for {} actions",
            q_matrix.rows()
        )));
    }
    if q_matrix.cols() != prior.channel_count() {
        return Err(CoreError::Shape {
            context: "posterior_sample_weight",
            expected: format!("{} reward channels", prior.channel_count()),
            actual: format!("{} columns", q_matrix.cols()),
        });
    }
    if !q_matrix.is_finite() {
        return Err(CoreError::NonFinite {
            context: "posterior_sample_weight",
            detail: "Q-matrix".into(),
        });
    }

    let action_count = q_matrix.rows();
    let mut particles = Vec::with_capacity(particle_count);
    let mut likelihoods = Vec::with_capacity(particle_count);
    let mut scalarized = vec![0.0; action_count];
    for _ in 0..particle_count {
        let particle = sample_weight(prior, rng);
        for (a, q) in scalarized.iter_mut().enumerate() {
            *q = particle.scalarize(q_matrix.row(a));
        }
        let probs = softmax_probs(&scalarized, beta)?;
        likelihoods.push(probs[action]);
        particles.push(particle);
    }

    let total: f64 = likelihoods.iter().sum();
    if total <= 0.0 {
        // Every particle assigned numerically zero probability to the
        // action; resampling is undefined, so fall back to the prior.
        return Ok(PosteriorDraw {
            sample: sample_weight(prior, rng),
            used_fallback: true,
        });
    }

    // Multinomial resampling of a single particle.
    let mut u = rng.random_range(0.0..total);
    let mut chosen = particle_count - 1;
    for (k, &l) in likelihoods.iter().enumerate() {
        if u < l {
            chosen = k;
            break;
        }
        u -= l;
    }
    Ok(PosteriorDraw {
        sample: particles.swap_remove(chosen),
        used_fallback: false,
    })
}
