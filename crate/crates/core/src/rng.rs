//! Deterministic stream splitting for parallel Monte Carlo.
//!
//! Work is cut into fixed-size batches; batch `i` draws from the ChaCha8
//! stream `i` of the run seed. Batches are reduced in index order, so the
//! merged result does not depend on how rayon schedules them or on the
//! number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub type McRng = ChaCha8Rng;

pub const BATCH: usize = 2048;

/// Independent generator for `(seed, stream)`.
pub fn stream(seed: u64, stream: u64) -> McRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Derive a child seed, used to give sub-experiments unrelated streams.
pub fn child_seed(seed: u64, label: u64) -> u64 {
    let mut r = stream(seed, 0x5eed_0000_0000 ^ label);
    r.random()
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point on 𝕊^{n-1} ⊂ ℝⁿ.
pub fn unit_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let g = gaussian_vec(rng, n);
        if let Some(u) = crate::linalg::normalize(&g) {
            return u;
        }
    }
}

/// Running sums for a mean estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(self, o: Moments) -> Moments {
        Moments { n: self.n + o.n, sum: self.sum + o.sum, sum_sq: self.sum_sq + o.sum_sq }
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let m = self.sum / n;
        let var = ((self.sum_sq - n * m * m) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Runs `body(rng, count)` over batches covering `samples` draws and returns
/// the per-batch results in batch order.
pub fn par_batches<A, F>(seed: u64, samples: usize, body: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut McRng, usize, usize) -> A + Sync,
{
    let nb = samples.div_ceil(BATCH);
    (0..nb)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, b as u64);
            let count = BATCH.min(samples - b * BATCH);
            body(&mut rng, b * BATCH, count)
        })
        .collect()
}

/// Mean of `f` over `samples` independent draws; `f` also receives the
/// global sample index (used for reproducible tie-breaking).
pub fn mc_mean<F>(seed: u64, samples: usize, f: F) -> Moments
where
    F: Fn(&mut McRng, usize) -> f64 + Sync,
{
    par_batches(seed, samples, |rng, start, count| {
        let mut m = Moments::default();
        for i in 0..count {
            m.push(f(rng, start + i));
        }
        m
    })
    .into_iter()
    .fold(Moments::default(), Moments::merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_count_does_not_change_result() {
        let f = |r: &mut McRng, _| r.random::<f64>();
        let a = mc_mean(9, 20_000, f);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| mc_mean(9, 20_000, f));
        assert_eq!(a, b);
        assert!((a.mean() - 0.5).abs() < 4.0 * a.std_error());
    }

    #[test]
    fn streams_differ() {
        let a: u64 = stream(1, 0).random();
        let b: u64 = stream(1, 1).random();
        assert_ne!(a, b);
    }
}
