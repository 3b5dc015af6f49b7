//! Seeded data generation: i.i.d. draws and a stationary stay-or-refresh
//! Markov chain.
//!
//! The chain keeps the previous pair with probability rho and otherwise
//! redraws it fresh from the base law, so the base law is stationary for
//! it. Its beta-mixing coefficients satisfy beta(k) <= rho^k: within any
//! window of k steps the chain refreshes at least once unless every step
//! kept the old state (probability rho^k), and conditioned on a refresh in
//! the window the future is drawn independently of the past, so the
//! expected total-variation gap between the conditional and unconditional
//! futures is at most the no-refresh probability. The i.i.d. sampler is the
//! rho = 0 instance of the same code path, with an identical derived
//! stream, so `sample_iid(dist, n, seed) == sample_markov(dist, 0, n, seed)`
//! holds bit for bit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::core::{cell_index, DistributionSpec};
use crate::error::{param_err, Error, Result};
use crate::rng::derive_rng;

/// Provenance carried by every generated sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub seed: u64,
    pub rho: f64,
    /// Content hash of the generating `DistributionSpec`.
    pub spec_hash: u64,
}

/// n labeled points: coordinates are grid-cell centers, labels in 1..=C.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    dim: usize,
    num_classes: usize,
    /// Flat row-major coordinates, n * dim entries.
    points: Vec<f64>,
    labels: Vec<usize>,
    meta: SampleMeta,
}

impl LabeledSample {
    pub fn new(
        dim: usize,
        num_classes: usize,
        points: Vec<f64>,
        labels: Vec<usize>,
        meta: SampleMeta,
    ) -> Result<Self> {
        if dim == 0 {
            return param_err("dim", "must be >= 1");
        }
        if points.len() != labels.len() * dim {
            return Err(Error::LengthMismatch {
                left: points.len(),
                right: labels.len() * dim,
            });
        }
        for &y in &labels {
            if y == 0 || y > num_classes {
                return Err(Error::LabelOutOfRange {
                    label: y,
                    num_classes,
                });
            }
        }
        Ok(LabeledSample {
            dim,
            num_classes,
            points,
            labels,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    /// Map every point back to its flat cell index on a grid.
    pub fn cells(&self, side: f64, resolution: usize) -> Result<Vec<usize>> {
        (0..self.len())
            .map(|i| cell_index(self.dim, side, resolution, self.point(i)))
            .collect()
    }
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|&p| {
            acc += p;
            acc
        })
        .collect()
}

fn draw_index(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Draw a length-n trajectory of the stay-or-refresh chain with stay
/// probability rho. Deterministic in the seed.
pub fn sample_markov(
    dist: &DistributionSpec,
    rho: f64,
    n: usize,
    seed: u64,
) -> Result<LabeledSample> {
    if !(0.0..1.0).contains(&rho) {
        return param_err("rho", format!("must lie in [0, 1), got {rho}"));
    }
    if n == 0 {
        return param_err("n", "must be >= 1");
    }
    let cell_cdf = cumulative(dist.cell_probs());
    let label_cdfs: Vec<Vec<f64>> = (0..dist.num_cells())
        .map(|c| cumulative(dist.label_probs(c)))
        .collect();
    let mut rng = derive_rng(seed, "sample-chain", 0);
    let mut points = Vec::with_capacity(n * dist.dim());
    let mut labels = Vec::with_capacity(n);
    let mut state: Option<(usize, usize)> = None;
    for _ in 0..n {
        let keep = match state {
            Some(_) => rng.random::<f64>() < rho,
            None => false,
        };
        let (cell, label) = if keep {
            state.expect("keep implies a previous state")
        } else {
            let cell = draw_index(&cell_cdf, rng.random::<f64>());
            let label = draw_index(&label_cdfs[cell], rng.random::<f64>()) + 1;
            (cell, label)
        };
        state = Some((cell, label));
        points.extend_from_slice(&dist.cell_center(cell));
        labels.push(label);
    }
    LabeledSample::new(
        dist.dim(),
        dist.num_classes(),
        points,
        labels,
        SampleMeta {
            seed,
            rho,
            spec_hash: dist.content_hash(),
        },
    )
}

/// n independent draws from the base law; the rho = 0 chain.
pub fn sample_iid(dist: &DistributionSpec, n: usize, seed: u64) -> Result<LabeledSample> {
    sample_markov(dist, 0.0, n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_yields_constant_sample() {
        let dist = DistributionSpec::new(
            1,
            1.0,
            2,
            3,
            vec![0.0, 1.0],
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]],
            None,
        )
        .unwrap();
        let s = sample_iid(&dist, 50, 4).unwrap();
        assert!(s.labels().iter().all(|&y| y == 3));
        assert!((0..s.len()).all(|i| s.point(i)[0] == 0.75));
    }

    #[test]
    fn same_seed_reproduces_the_sample() {
        let dist = DistributionSpec::uniform(2, 1.0, 3, 3).unwrap();
        let a = sample_markov(&dist, 0.4, 200, 9).unwrap();
        let b = sample_markov(&dist, 0.4, 200, 9).unwrap();
        assert_eq!(a, b);
        let c = sample_markov(&dist, 0.4, 200, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rho_zero_equals_iid_bit_for_bit() {
        let dist = DistributionSpec::uniform(1, 1.0, 4, 3).unwrap();
        let iid = sample_iid(&dist, 500, 21).unwrap();
        let markov = sample_markov(&dist, 0.0, 500, 21).unwrap();
        assert_eq!(iid, markov);
    }

    #[test]
    fn iid_cell_frequencies_match_within_binomial_ci() {
        let dist = DistributionSpec::uniform(1, 1.0, 4, 3).unwrap();
        let n = 100_000;
        let s = sample_iid(&dist, n, 7).unwrap();
        let cells = s.cells(1.0, 4).unwrap();
        let p = 0.25;
        let tol = 4.0 * (p * (1.0 - p) / n as f64).sqrt();
        for cell in 0..4 {
            let freq = cells.iter().filter(|&&c| c == cell).count() as f64 / n as f64;
            assert!((freq - p).abs() <= tol, "cell {cell}: {freq}");
        }
    }

    #[test]
    fn markov_repeat_frequency_matches_closed_form() {
        // P(Z_{t+1} == Z_t) = rho + (1 - rho) sum_z p_z^2. Under a uniform
        // base law the repeat indicators are i.i.d., so the binomial CI is
        // exact.
        let dist = DistributionSpec::uniform(1, 1.0, 4, 3).unwrap();
        let rho = 0.9;
        let n = 100_000;
        let s = sample_markov(&dist, rho, n, 13).unwrap();
        let cells = s.cells(1.0, 4).unwrap();
        let repeats = (1..n)
            .filter(|&t| cells[t] == cells[t - 1] && s.labels()[t] == s.labels()[t - 1])
            .count() as f64
            / (n - 1) as f64;
        let expected = rho + (1.0 - rho) * dist.collision_prob();
        let se = (expected * (1.0 - expected) / (n - 1) as f64).sqrt();
        assert!(
            (repeats - expected).abs() <= 4.0 * se,
            "repeats {repeats} vs {expected} (se {se})"
        );
    }

    #[test]
    fn markov_marginals_stay_stationary() {
        let dist = DistributionSpec::uniform(1, 1.0, 4, 3).unwrap();
        let n = 100_000;
        let s = sample_markov(&dist, 0.5, n, 17).unwrap();
        let cells = s.cells(1.0, 4).unwrap();
        let p = 0.25;
        // Dependent draws: widen the binomial CI by the correlation factor
        // (1 + rho) / (1 - rho) = 3 on the variance.
        let tol = 4.0 * (3.0 * p * (1.0 - p) / n as f64).sqrt();
        for cell in 0..4 {
            let freq = cells.iter().filter(|&&c| c == cell).count() as f64 / n as f64;
            assert!((freq - p).abs() <= tol, "cell {cell}: {freq}");
        }
    }

    #[test]
    fn k_step_conditional_law_is_the_geometric_mixture() {
        // For the stay-or-refresh chain the k-step kernel is exactly
        // P(Z_{t+k} = z' | Z_t = z) = rho^k [z' = z] + (1 - rho^k) pi(z'),
        // which is what makes beta(k) <= rho^k hold. Check the empirical
        // two-step conditionals on a four-state uniform chain.
        let dist = DistributionSpec::uniform(1, 1.0, 2, 2).unwrap();
        let (rho, n, k) = (0.6f64, 400_000usize, 2usize);
        let s = sample_markov(&dist, rho, n, 29).unwrap();
        let cells = s.cells(1.0, 2).unwrap();
        let state = |t: usize| cells[t] * 2 + (s.labels()[t] - 1);
        let mut counts = [[0u64; 4]; 4];
        // stride the pairs to damp the dependence between them
        let mut t = 0;
        while t + k < n {
            counts[state(t)][state(t + k)] += 1;
            t += 2 * k;
        }
        let rho_k = rho.powi(k as i32);
        for z in 0..4 {
            let total: u64 = counts[z].iter().sum();
            for z2 in 0..4 {
                let observed = counts[z][z2] as f64 / total as f64;
                let expected = if z == z2 { rho_k } else { 0.0 } + (1.0 - rho_k) * 0.25;
                let se = (expected * (1.0 - expected) / total as f64).sqrt();
                assert!(
                    (observed - expected).abs() <= 6.0 * se,
                    "state {z} -> {z2}: observed {observed}, expected {expected} (se {se})"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_rho_and_empty() {
        let dist = DistributionSpec::uniform(1, 1.0, 2, 3).unwrap();
        assert!(sample_markov(&dist, 1.0, 10, 0).is_err());
        assert!(sample_markov(&dist, -0.1, 10, 0).is_err());
        assert!(sample_markov(&dist, 0.5, 0, 0).is_err());
    }
}
