//! Independent oracles shared by the property and acceptance suites. None of
//! these call into the code paths they check.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use ctxrep_core::{BlockSpectralFamily, CountTable, OutcomeSet, ProbabilityVector};

/// Coefficients of `λ` in the vertex set of `A_j` (the identity with column
/// `j` replaced by `v`), from a dense LU solve.
pub fn hull_coefficients(v: &[f64], lambda: &[f64], j: usize) -> Option<Vec<f64>> {
    let n = v.len();
    let m = DMatrix::from_fn(n, n, |r, c| {
        if c == j {
            v[r]
        } else if r == c {
            1.0
        } else {
            0.0
        }
    });
    m.lu()
        .solve(&DVector::from_column_slice(lambda))
        .map(|c| c.iter().copied().collect())
}

/// Regions whose closed hull contains `λ`, up to `eps` on the coefficients.
pub fn containing_regions(v: &[f64], lambda: &[f64], eps: f64) -> Vec<usize> {
    (0..v.len())
        .filter(|&j| {
            hull_coefficients(v, lambda, j)
                .map(|c| c.iter().all(|&x| x >= -eps))
                .unwrap_or(false)
        })
        .collect()
}

/// Whether some `a_1, b_1 ∈ [0, 1]` give `counts / N = (a_1, 1-a_1) ⊗ (b_1, 1-b_1)`,
/// searching every fraction with denominator at most `N`. Any factorization
/// must use the marginals, whose denominators divide `N`, so the search is
/// complete.
pub fn brute_force_factorizable(counts: [[i64; 2]; 2]) -> bool {
    let total: i64 = counts.iter().flatten().sum();
    let target = |j: usize, k: usize| Ratio::new(counts[j][k], total);
    let mut grid: Vec<Ratio<i64>> = (1..=total)
        .flat_map(|d| (0..=d).map(move |i| Ratio::new(i, d)))
        .collect();
    grid.sort();
    grid.dedup();
    let one = Ratio::from_integer(1);
    grid.iter().any(|&a| {
        grid.iter().any(|&b| {
            a * b == target(0, 0)
                && a * (one - b) == target(0, 1)
                && (one - a) * b == target(1, 0)
                && (one - a) * (one - b) == target(1, 1)
        })
    })
}

/// All 2×2 count tables with `1 ≤ total ≤ max_total`.
pub fn all_two_by_two(max_total: i64) -> Vec<[[i64; 2]; 2]> {
    let mut out = Vec::new();
    for total in 1..=max_total {
        for a in 0..=total {
            for b in 0..=total - a {
                for c in 0..=total - a - b {
                    out.push([[a, b], [c, total - a - b - c]]);
                }
            }
        }
    }
    out
}

/// Smallest `max_{j,k} |p_jk − a_j b_k|` over `(a_1, b_1)` on a grid of
/// the given step.
pub fn grid_min_residual(p: [[f64; 2]; 2], step: f64) -> f64 {
    let steps = (1.0 / step).round() as usize;
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        let a = [i as f64 * step, 1.0 - i as f64 * step];
        for k in 0..=steps {
            let b = [k as f64 * step, 1.0 - k as f64 * step];
            let mut worst: f64 = 0.0;
            for (j, row) in p.iter().enumerate() {
                for (kk, &x) in row.iter().enumerate() {
                    worst = worst.max((x - a[j] * b[kk]).abs());
                }
            }
            best = best.min(worst);
        }
    }
    best
}

/// Random exact distribution from counts in `0..=max_count` (total ≥ 1).
pub fn random_counts<R: Rng>(rng: &mut R, n: usize, max_count: u64) -> CountTable {
    loop {
        let counts: Vec<u64> = (0..n).map(|_| rng.random_range(0..=max_count)).collect();
        if counts.iter().any(|&c| c > 0) {
            return CountTable::new(OutcomeSet::indexed(n).unwrap(), counts).unwrap();
        }
    }
}

/// Random float distribution with strictly positive entries.
pub fn random_positive_floats<R: Rng>(rng: &mut R, n: usize) -> ProbabilityVector {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head: f64 = probs[..n - 1].iter().sum();
    probs[n - 1] = 1.0 - head;
    ProbabilityVector::from_floats(OutcomeSet::indexed(n).unwrap(), probs).unwrap()
}

/// Random partition of `0..m` into `n` blocks with sizes in `1..=n`.
pub fn random_family<R: Rng>(rng: &mut R, n: usize) -> BlockSpectralFamily {
    let sizes: Vec<usize> = (0..n).map(|_| rng.random_range(1..=n)).collect();
    let m: usize = sizes.iter().sum();
    let mut indices: Vec<usize> = (0..m).collect();
    indices.shuffle(rng);
    let mut rest = indices.as_slice();
    let blocks = sizes
        .iter()
        .map(|&b| {
            let (head, tail) = rest.split_at(b);
            rest = tail;
            head.to_vec()
        })
        .collect();
    BlockSpectralFamily::new(m, blocks).unwrap()
}

/// Three binomial standard errors of a frequency estimated from `trials`.
pub fn three_sigma(p: f64, trials: u64) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}
