//! Uniform-deviation frequency estimation for Markov-dependent samples,
//! with the alternating-block tail bound and an independent-blocks
//! surrogate run as a diagnostic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{mixing_deviation_bound, BoundReport, EntropyFn, MixingCoeff};
use crate::capacity::{exact_covering, DistanceMatrix};
use crate::core::{DistributionSpec, MultiClassTuple};
use crate::error::{param_err, precondition, Result};
use crate::experiments::deviation::{
    binomial_se, bv_params_for, margin_class_on_sample, margin_entropy_fn, validate_classes,
};
use crate::experiments::risk::empirical_risk_on_cells;
use crate::experiments::{blocking, exact_risk, sample_markov};
use crate::rng::mix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixingReport {
    pub n: usize,
    pub epsilon: f64,
    pub gamma: f64,
    pub trials: u64,
    pub seed: u64,
    pub rho: f64,
    pub a_n: usize,
    pub b_n: usize,
    pub class_count: usize,
    pub exceed_count: u64,
    pub p_hat: f64,
    pub std_error: f64,
    /// Geometric envelope rho^(a_n) used for beta(a_n) inside the bound.
    pub beta_at_a_n: f64,
    pub covering_number: u64,
    /// Block tail bound with the measured covering number as entropy.
    pub bound_empirical_entropy: BoundReport,
    /// Block tail bound with the margin-class entropy surrogate.
    pub bound_margin_entropy: BoundReport,
    /// Exceedance frequency when odd-block-style independent segments
    /// replace the dependent trajectory; diagnostic only, no contract.
    pub surrogate_exceed_count: u64,
    pub surrogate_p_hat: f64,
    pub surrogate_std_error: f64,
    pub exact_risks: Vec<f64>,
    pub sup_deviations: Vec<f64>,
    pub surrogate_sup_deviations: Vec<f64>,
}

/// Run the mixing deviation experiment: trajectories of the stay-or-refresh
/// chain with stay probability rho, blocked as (a_n, b_n = n / (2 a_n)).
#[allow(clippy::too_many_arguments)]
pub fn mixing_deviation_experiment(
    classes: &[MultiClassTuple],
    dist: &DistributionSpec,
    rho: f64,
    n: usize,
    a_n: usize,
    eps: f64,
    gamma: f64,
    trials: u64,
    seed: u64,
) -> Result<MixingReport> {
    validate_classes(classes, dist)?;
    if !(eps > 0.0 && eps < 1.0) {
        return param_err("eps", format!("must lie in (0, 1), got {eps}"));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return param_err("gamma", format!("must lie in (0, 1], got {gamma}"));
    }
    if !(0.0..1.0).contains(&rho) {
        return param_err("rho", format!("must lie in [0, 1), got {rho}"));
    }
    if trials == 0 {
        return param_err("trials", "must be >= 1");
    }
    let partition = blocking(n, a_n)?;
    let b_n = partition.b_n;
    if !(b_n as f64 > 2.0 / (eps * eps * a_n as f64)) {
        return precondition(format!(
            "b_n > 2/(eps^2 a_n) required (b_n = {b_n}, 2/(eps^2 a_n) = {})",
            2.0 / (eps * eps * a_n as f64)
        ));
    }
    let (_, side, resolution, _) = classes[0].geometry();
    let exact_risks: Vec<f64> = classes
        .iter()
        .map(|g| exact_risk(g, gamma, dist))
        .collect::<Result<_>>()?;

    let sup_over_classes = |cells: &[usize], labels: &[usize]| -> Result<f64> {
        let mut sup = f64::NEG_INFINITY;
        for (k, g) in classes.iter().enumerate() {
            let emp = empirical_risk_on_cells(g, gamma, cells, labels)?;
            let dev = exact_risks[k] - emp;
            if dev > sup {
                sup = dev;
            }
        }
        Ok(sup)
    };

    let per_trial: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_markov(dist, rho, n, mix(seed, "mixing-trial", t))?;
            let cells = sample.cells(side, resolution)?;
            let sup = sup_over_classes(&cells, sample.labels())?;

            // Independent-blocks surrogate: b_n fresh chain segments of
            // length a_n, each started from stationarity, standing in for
            // the odd blocks.
            let mut surrogate_cells = Vec::with_capacity(b_n * a_n);
            let mut surrogate_labels = Vec::with_capacity(b_n * a_n);
            for j in 0..b_n {
                let seg = sample_markov(
                    dist,
                    rho,
                    a_n,
                    mix(seed, "mixing-surrogate", t * b_n as u64 + j as u64),
                )?;
                surrogate_cells.extend(seg.cells(side, resolution)?);
                surrogate_labels.extend_from_slice(seg.labels());
            }
            let sup_surrogate = sup_over_classes(&surrogate_cells, &surrogate_labels)?;
            Ok((sup, sup_surrogate))
        })
        .collect::<Result<_>>()?;

    let sup_deviations: Vec<f64> = per_trial.iter().map(|&(s, _)| s).collect();
    let surrogate_sup_deviations: Vec<f64> = per_trial.iter().map(|&(_, s)| s).collect();
    let exceed_count = sup_deviations.iter().filter(|&&d| d > eps).count() as u64;
    let surrogate_exceed_count = surrogate_sup_deviations
        .iter()
        .filter(|&&d| d > eps)
        .count() as u64;
    let p_hat = exceed_count as f64 / trials as f64;
    let surrogate_p_hat = surrogate_exceed_count as f64 / trials as f64;

    let beta = MixingCoeff::geometric(rho)?;
    let beta_at_a_n = beta.eval(a_n as u64);

    // Entropy route 1: exact L1 covering on a fresh dependent 2n draw at
    // the block-bound scale eps gamma / 16.
    let cover_sample = sample_markov(dist, rho, 2 * n, mix(seed, "mixing-cover", 0))?;
    let margin_class = margin_class_on_sample(classes, &cover_sample, gamma)?;
    let matrix = DistanceMatrix::from_class(&margin_class, 1.0)?;
    let covering = exact_covering(&matrix, eps * gamma / 16.0)?;
    let bound_empirical_entropy = mixing_deviation_bound(
        b_n as u64,
        a_n as u64,
        eps,
        gamma,
        &beta,
        &EntropyFn::constant((covering as f64).ln()),
    )?;

    // Entropy route 2: margin-class entropy surrogate.
    let params = bv_params_for(classes, gamma);
    let bound_margin_entropy = mixing_deviation_bound(
        b_n as u64,
        a_n as u64,
        eps,
        gamma,
        &beta,
        &margin_entropy_fn(&params, gamma)?,
    )?;

    Ok(MixingReport {
        n,
        epsilon: eps,
        gamma,
        trials,
        seed,
        rho,
        a_n,
        b_n,
        class_count: classes.len(),
        exceed_count,
        p_hat,
        std_error: binomial_se(p_hat, trials),
        beta_at_a_n,
        covering_number: covering as u64,
        bound_empirical_entropy,
        bound_margin_entropy,
        surrogate_exceed_count,
        surrogate_p_hat,
        surrogate_std_error: binomial_se(surrogate_p_hat, trials),
        exact_risks,
        sup_deviations,
        surrogate_sup_deviations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::random_tuples;
    use crate::experiments::deviation_experiment;

    fn setup(m: usize, seed: u64) -> (Vec<MultiClassTuple>, DistributionSpec) {
        let classes = random_tuples(m, 3, 1, 1.0, 8, 1.0, 2.0, seed).unwrap();
        let dist = DistributionSpec::uniform(1, 1.0, 8, 3).unwrap();
        (classes, dist)
    }

    #[test]
    fn rho_zero_matches_the_iid_experiment_statistically() {
        let (classes, dist) = setup(3, 2);
        let mixing =
            mixing_deviation_experiment(&classes, &dist, 0.0, 256, 4, 0.25, 0.5, 60, 5).unwrap();
        let iid = deviation_experiment(&classes, &dist, 256, 0.25, 0.5, 60, 5).unwrap();
        let tol = 3.0 * (mixing.std_error + iid.std_error).max(0.05);
        assert!((mixing.p_hat - iid.p_hat).abs() <= tol);
        assert_eq!(mixing.beta_at_a_n, 0.0);
    }

    #[test]
    fn blocked_arithmetic_is_checked() {
        let (classes, dist) = setup(2, 3);
        // 2 a_n does not divide n
        assert!(mixing_deviation_experiment(&classes, &dist, 0.5, 250, 4, 0.25, 0.5, 5, 0).is_err());
        // b_n too small: n = 8, a_n = 4 gives b_n = 1 <= 2/(eps^2 a_n)
        assert!(mixing_deviation_experiment(&classes, &dist, 0.5, 8, 4, 0.25, 0.5, 5, 0).is_err());
    }

    #[test]
    fn reports_are_bit_reproducible() {
        let (classes, dist) = setup(3, 7);
        let a = mixing_deviation_experiment(&classes, &dist, 0.5, 128, 4, 0.25, 0.5, 20, 9)
            .unwrap();
        let b = mixing_deviation_experiment(&classes, &dist, 0.5, 128, 4, 0.25, 0.5, 20, 9)
            .unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn bound_includes_the_beta_term() {
        let (classes, dist) = setup(2, 11);
        let report =
            mixing_deviation_experiment(&classes, &dist, 0.5, 128, 2, 0.3, 0.5, 10, 1).unwrap();
        assert_eq!(report.beta_at_a_n, 0.25);
        let beta_term = report.bound_empirical_entropy.diagnostics["beta_term"];
        assert_eq!(beta_term, 2.0 * report.b_n as f64 * 0.25);
        assert!(report.surrogate_sup_deviations.len() == 10);
    }
}
