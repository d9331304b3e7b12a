//! Seeded random streams and uniform sampling on the probability simplex.
//!
//! Work is cut into fixed-size chunks; chunk `i` draws from ChaCha stream `i`
//! of the master seed. Results therefore depend only on `(seed, count)` and
//! never on how many worker threads processed the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::real::HiddenVariable;

/// Number of draws taken from one substream before moving to the next.
pub const CHUNK_SIZE: u64 = 1 << 14;

/// Independent substream `stream` of the master `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `total` draws into `(stream index, draws)` chunks.
pub fn chunks(total: u64) -> impl Iterator<Item = (u64, u64)> + Clone {
    let n_chunks = total.div_ceil(CHUNK_SIZE);
    (0..n_chunks).map(move |i| {
        let start = i * CHUNK_SIZE;
        (i, CHUNK_SIZE.min(total - start))
    })
}

/// Writes a uniform point of the simplex into `out` by normalizing i.i.d.
/// standard exponentials.
pub fn fill_uniform_simplex<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut sum = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(Exp1);
            sum += *x;
        }
        if sum > 0.0 {
            out.iter_mut().for_each(|x| *x /= sum);
            return;
        }
    }
}

/// Iterator over uniformly distributed hidden variables.
#[derive(Debug, Clone)]
pub struct SimplexSampler {
    n: usize,
    seed: u64,
    remaining: u64,
    stream: u64,
    left_in_chunk: u64,
    rng: ChaCha8Rng,
}

impl SimplexSampler {
    pub fn new(n: usize, count: u64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("simplex dimension must be at least 1".into()));
        }
        if count == 0 {
            return Err(Error::InvalidConfig("sample count must be at least 1".into()));
        }
        Ok(Self {
            n,
            seed,
            remaining: count,
            stream: 0,
            left_in_chunk: CHUNK_SIZE,
            rng: substream(seed, 0),
        })
    }

    /// Draws the next point into `out` without allocating.
    pub fn next_into(&mut self, out: &mut [f64]) -> bool {
        if self.remaining == 0 {
            return false;
        }
        if self.left_in_chunk == 0 {
            self.stream += 1;
            self.rng = substream(self.seed, self.stream);
            self.left_in_chunk = CHUNK_SIZE;
        }
        fill_uniform_simplex(&mut self.rng, &mut out[..self.n]);
        self.left_in_chunk -= 1;
        self.remaining -= 1;
        true
    }
}

impl Iterator for SimplexSampler {
    type Item = HiddenVariable;

    fn next(&mut self) -> Option<HiddenVariable> {
        let mut buf = vec![0.0; self.n];
        self.next_into(&mut buf)
            .then(|| HiddenVariable::new_unchecked(buf))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

/// `count` uniform draws from the `n`-outcome simplex, reproducible for a
/// fixed `seed`.
pub fn sample_hidden_variables(n: usize, count: u64, seed: u64) -> Result<SimplexSampler> {
    SimplexSampler::new(n, count, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_and_sigma(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn two_outcome_mean_is_half() {
        let xs: Vec<f64> = sample_hidden_variables(2, 100_000, 7)
            .unwrap()
            .map(|l| l.components()[0])
            .collect();
        let (mean, se) = mean_and_sigma(&xs);
        assert!((mean - 0.5).abs() <= 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn three_outcome_means_are_third() {
        let draws: Vec<HiddenVariable> = sample_hidden_variables(3, 100_000, 11).unwrap().collect();
        for k in 0..3 {
            let xs: Vec<f64> = draws.iter().map(|l| l.components()[k]).collect();
            let (mean, se) = mean_and_sigma(&xs);
            assert!((mean - 1.0 / 3.0).abs() <= 3.0 * se, "coord {k}: {mean} ± {se}");
        }
    }

    #[test]
    fn four_outcome_marginal_matches_beta_cdf() {
        // λ_1 ~ Beta(1, 3): P(λ_1 ≤ 1/4) = 1 - (3/4)^3.
        let target = 1.0 - 0.75f64.powi(3);
        assert_eq!(target, 0.578125);
        let trials = 100_000u64;
        let hits = sample_hidden_variables(4, trials, 3)
            .unwrap()
            .filter(|l| l.components()[0] <= 0.25)
            .count() as f64;
        let freq = hits / trials as f64;
        let sigma = (target * (1.0 - target) / trials as f64).sqrt();
        assert!((freq - target).abs() <= 3.0 * sigma, "{freq}");
    }

    #[test]
    fn streams_are_reproducible_and_cross_chunks() {
        let count = CHUNK_SIZE + 5;
        let a: Vec<_> = sample_hidden_variables(3, count, 42).unwrap().collect();
        let b: Vec<_> = sample_hidden_variables(3, count, 42).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a.len() as u64, count);
        let c: Vec<_> = sample_hidden_variables(3, 4, 43).unwrap().collect();
        assert_ne!(a[..4], c[..]);
    }

    #[test]
    fn chunking_covers_total() {
        let parts: Vec<_> = chunks(2 * CHUNK_SIZE + 3).collect();
        assert_eq!(parts, vec![(0, CHUNK_SIZE), (1, CHUNK_SIZE), (2, 3)]);
        assert_eq!(chunks(0).count(), 0);
    }

    #[test]
    fn rejects_empty_requests() {
        assert!(sample_hidden_variables(0, 10, 1).is_err());
        assert!(sample_hidden_variables(2, 0, 1).is_err());
    }
}
