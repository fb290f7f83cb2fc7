//! Uniform-with-replacement replay buffer.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::transition::Transition;

/// Bounded transition store. Once full, new transitions overwrite the
/// oldest ones. Batches are sampled uniformly with replacement.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    transitions: Vec<Transition>,
    capacity: usize,
    write_head: usize,
    rng: ChaCha8Rng,
}

impl ReplayBuffer {
    pub fn new(capacity: usize, seed: u64) -> Self {
        assert!(capacity > 0, "capacity must be positive");
        Self {
            transitions: Vec::with_capacity(capacity.min(1 << 20)),
            capacity,
            write_head: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Buffer pre-filled with an offline dataset's transitions. The capacity
    /// equals the dataset size, so nothing is ever evicted.
    pub fn from_transitions(transitions: Vec<Transition>, seed: u64) -> Self {
        let capacity = transitions.len().max(1);
        Self {
            transitions,
            capacity,
            write_head: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn push(&mut self, t: Transition) {
        if self.transitions.len() < self.capacity {
            self.transitions.push(t);
        } else {
            self.transitions[self.write_head] = t;
            self.write_head = (self.write_head + 1) % self.capacity;
        }
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Uniform-with-replacement index sample.
    pub fn sample_indices(&mut self, batch_size: usize) -> Vec<usize> {
        (0..batch_size)
            .map(|_| self.rng.random_range(0..self.transitions.len()))
            .collect()
    }

    pub fn sample_batch(&mut self, batch_size: usize) -> Vec<Transition> {
        self.sample_indices(batch_size)
            .into_iter()
            .map(|i| self.transitions[i].clone())
            .collect()
    }
}
