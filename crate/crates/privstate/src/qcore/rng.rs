//! Seeded, splittable randomness.
//!
//! All stochastic operations take an explicit [`SeedStream`]. A stream is
//! derived from a root seed; independent substreams (one per Monte-Carlo
//! trial, for instance) come from [`SeedStream::split`], which mixes the
//! parent key with the child index rather than sharing generator state.
//! Transcripts are therefore bit-reproducible per `(seed, trial)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn expand_key(words: [u64; 4]) -> [u8; 32] {
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_exact_mut(8).zip(words) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    key
}

/// Deterministic random stream with indexed splitting.
#[derive(Clone, Debug)]
pub struct SeedStream {
    key: [u64; 4],
    rng: ChaCha12Rng,
}

impl SeedStream {
    /// Root stream of a run or scenario.
    pub fn root(seed: u64) -> Self {
        let mut state = seed;
        let key = [
            splitmix64(&mut state),
            splitmix64(&mut state),
            splitmix64(&mut state),
            splitmix64(&mut state),
        ];
        SeedStream {
            key,
            rng: ChaCha12Rng::from_seed(expand_key(key)),
        }
    }

    /// Independent child stream; does not read or advance this stream.
    pub fn split(&self, index: u64) -> Self {
        let mut state = self.key[0] ^ index.wrapping_mul(0xa076_1d64_78bd_642f);
        let mut key = [0u64; 4];
        for (slot, parent) in key.iter_mut().zip(self.key) {
            *slot = splitmix64(&mut state) ^ parent.rotate_left(17);
        }
        SeedStream {
            key,
            rng: ChaCha12Rng::from_seed(expand_key(key)),
        }
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.rng.random_range(0..n)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard normal deviate (Box-Muller).
    pub fn normal(&mut self) -> f64 {
        let u = (1.0 - self.uniform()).max(f64::MIN_POSITIVE);
        let v = self.uniform();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }

    /// Sample an index from a probability vector (values renormalized by
    /// their sum). A zero-probability index is never returned.
    pub fn sample_distribution(&mut self, probs: &[f64]) -> usize {
        let total: f64 = probs.iter().sum();
        debug_assert!(total > 0.0);
        let mut target = self.uniform() * total;
        let mut last_positive = 0;
        for (i, &p) in probs.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            last_positive = i;
            if target < p {
                return i;
            }
            target -= p;
        }
        last_positive
    }

    /// `k` distinct indices drawn from `[0, n)`, in draw order
    /// (partial Fisher-Yates over an index table).
    pub fn choose_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        debug_assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<V>(&mut self, items: &mut [V]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    pub fn random_u64(&mut self) -> u64 {
        self.rng.random()
    }

    /// `count` packed random bits, little-endian within each word.
    pub fn random_bit_words(&mut self, count: usize) -> Vec<u64> {
        (0..count.div_ceil(64)).map(|_| self.random_u64()).collect()
    }
}
