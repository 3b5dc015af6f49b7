//! Uniform-deviation frequency estimation for independent samples.
//!
//! Each trial draws a fresh n-sample, computes the supremum over a finite
//! class list of (exact risk - empirical risk), and the report compares the
//! exceedance frequency against the closed-form tail bound evaluated two
//! ways: with the metric entropy measured on a fresh 2n-point draw (exact
//! covering of the finite list) and with the margin-class entropy bound fed
//! by the BV fat-shattering surrogate. A finite list lower-bounds the
//! supremum over the full class, so observed frequencies must stay below
//! the bounds whenever those are informative; that is a necessary check,
//! never claimed sufficient.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    iid_deviation_bound, margin_entropy_bound, BoundReport, EntropyFn, FatFn, LogBase,
};
use crate::capacity::{exact_covering, DistanceMatrix};
use crate::core::{
    truncate, BoundParams, DistributionSpec, FiniteFunctionClass, MultiClassTuple,
};
use crate::error::{param_err, precondition, Error, Result};
use crate::experiments::risk::empirical_risk_on_cells;
use crate::experiments::{exact_risk, sample_iid, LabeledSample};
use crate::rng::mix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviationReport {
    pub n: usize,
    pub epsilon: f64,
    pub gamma: f64,
    pub trials: u64,
    pub seed: u64,
    pub class_count: usize,
    pub exceed_count: u64,
    pub p_hat: f64,
    pub std_error: f64,
    /// Finite-class baseline m exp(-2 n eps^2).
    pub baseline_union_hoeffding: f64,
    /// Size of the exact L1 cover of the class list on the fresh 2n draw.
    pub covering_number: u64,
    /// Tail bound with the measured covering number as entropy.
    pub bound_empirical_entropy: BoundReport,
    /// Tail bound with the margin-class entropy surrogate.
    pub bound_margin_entropy: BoundReport,
    pub exact_risks: Vec<f64>,
    /// Per-trial supremum deviations, indexed by trial.
    pub sup_deviations: Vec<f64>,
}

impl DeviationReport {
    pub fn exceeded(&self, trial: usize) -> bool {
        self.sup_deviations[trial] > self.epsilon
    }
}

pub(crate) fn validate_classes(
    classes: &[MultiClassTuple],
    dist: &DistributionSpec,
) -> Result<()> {
    if classes.is_empty() {
        return param_err("classes", "need at least one class tuple");
    }
    for (i, g) in classes.iter().enumerate() {
        let (d, a, res, _) = g.geometry();
        if d != dist.dim()
            || a != dist.side()
            || res != dist.resolution()
            || g.num_classes() != dist.num_classes()
        {
            return Err(Error::GeometryMismatch(format!(
                "class tuple {i} does not match the distribution grid"
            )));
        }
    }
    Ok(())
}

/// Evaluate the truncated margins of every tuple on a labeled sample,
/// yielding the finite margin class the covering route consumes.
pub(crate) fn margin_class_on_sample(
    classes: &[MultiClassTuple],
    sample: &LabeledSample,
    gamma: f64,
) -> Result<FiniteFunctionClass> {
    let (_, side, resolution, _) = classes[0].geometry();
    let cells = sample.cells(side, resolution)?;
    let rows = classes
        .iter()
        .map(|g| {
            cells
                .iter()
                .zip(sample.labels())
                .map(|(&cell, &y)| Ok(truncate(g.margin_at_cell(cell, y)?, gamma)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteFunctionClass::new(rows, gamma, "truncated margins on a fresh sample")
}

/// Bound parameters read off the class list: the grid geometry plus the
/// largest observed component variation (floored at M, which any valid
/// variation budget dominates).
pub(crate) fn bv_params_for(classes: &[MultiClassTuple], gamma: f64) -> BoundParams {
    let (d, a, _, m) = classes[0].geometry();
    let v = classes
        .iter()
        .map(MultiClassTuple::max_total_variation)
        .fold(0.0, f64::max)
        .max(m);
    BoundParams {
        a,
        m,
        v,
        d,
        c: classes[0].num_classes(),
        gamma,
        ..BoundParams::default()
    }
}

/// Margin-class entropy surrogate as an `EntropyFn`, backed by the BV
/// fat-shattering bound with K = 1.
pub(crate) fn margin_entropy_fn(params: &BoundParams, gamma: f64) -> Result<EntropyFn> {
    let fat = FatFn::bv(params)?;
    let c = params.c;
    let m = params.m;
    Ok(EntropyFn::new(move |scale, _| {
        margin_entropy_bound(c, scale, gamma, m, &fat, LogBase::E)
            .map(|r| r.value)
            .unwrap_or(f64::INFINITY)
    }))
}

pub(crate) fn binomial_se(p_hat: f64, trials: u64) -> f64 {
    (p_hat * (1.0 - p_hat) / trials as f64).sqrt()
}

/// Run the deviation experiment. Reproducible bit for bit given
/// (seed, trials, n); trials execute in parallel under per-trial derived
/// seeds and aggregate by trial index.
pub fn deviation_experiment(
    classes: &[MultiClassTuple],
    dist: &DistributionSpec,
    n: usize,
    eps: f64,
    gamma: f64,
    trials: u64,
    seed: u64,
) -> Result<DeviationReport> {
    validate_classes(classes, dist)?;
    if !(eps > 0.0 && eps < 1.0) {
        return param_err("eps", format!("must lie in (0, 1), got {eps}"));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return param_err("gamma", format!("must lie in (0, 1], got {gamma}"));
    }
    if !(n as f64 > 2.0 / (eps * eps)) {
        return precondition(format!(
            "n > 2/eps^2 required (n = {n}, 2/eps^2 = {})",
            2.0 / (eps * eps)
        ));
    }
    if trials == 0 {
        return param_err("trials", "must be >= 1");
    }
    let (_, side, resolution, _) = classes[0].geometry();
    let exact_risks: Vec<f64> = classes
        .iter()
        .map(|g| exact_risk(g, gamma, dist))
        .collect::<Result<_>>()?;

    let sup_deviations: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_iid(dist, n, mix(seed, "deviation-trial", t))?;
            let cells = sample.cells(side, resolution)?;
            let mut sup = f64::NEG_INFINITY;
            for (k, g) in classes.iter().enumerate() {
                let emp = empirical_risk_on_cells(g, gamma, &cells, sample.labels())?;
                let dev = exact_risks[k] - emp;
                if dev > sup {
                    sup = dev;
                }
            }
            Ok(sup)
        })
        .collect::<Result<_>>()?;

    let exceed_count = sup_deviations.iter().filter(|&&d| d > eps).count() as u64;
    let p_hat = exceed_count as f64 / trials as f64;

    // Entropy route 1: exact L1 covering of the class list on a fresh 2n draw.
    let cover_sample = sample_iid(dist, 2 * n, mix(seed, "deviation-cover", 0))?;
    let margin_class = margin_class_on_sample(classes, &cover_sample, gamma)?;
    let matrix = DistanceMatrix::from_class(&margin_class, 1.0)?;
    let covering = exact_covering(&matrix, eps * gamma / 8.0)?;
    let bound_empirical_entropy = iid_deviation_bound(
        n as u64,
        eps,
        gamma,
        &EntropyFn::constant((covering as f64).ln()),
    )?;

    // Entropy route 2: margin-class entropy from the BV fat surrogate.
    let params = bv_params_for(classes, gamma);
    let bound_margin_entropy =
        iid_deviation_bound(n as u64, eps, gamma, &margin_entropy_fn(&params, gamma)?)?;

    let baseline =
        classes.len() as f64 * (-2.0 * n as f64 * eps * eps).exp();

    Ok(DeviationReport {
        n,
        epsilon: eps,
        gamma,
        trials,
        seed,
        class_count: classes.len(),
        exceed_count,
        p_hat,
        std_error: binomial_se(p_hat, trials),
        baseline_union_hoeffding: baseline,
        covering_number: covering as u64,
        bound_empirical_entropy,
        bound_margin_entropy,
        exact_risks,
        sup_deviations,
    })
}
