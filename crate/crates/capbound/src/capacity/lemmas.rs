//! Randomized verification suites for the capacity lemmas the bound
//! calculators lean on. Each suite draws small random classes where every
//! quantity involved is computable exactly; a single counterexample
//! falsifies the implementation and is escalated as a hard error.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::fat::{exact_fat_with_subset, for_each_combination};
use crate::capacity::rademacher::exact_rademacher_on;
use crate::capacity::{exact_covering, DistanceMatrix};
use crate::core::FiniteFunctionClass;
use crate::error::{Error, Result};
use crate::rng::derive_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaSuite {
    /// Fat dimension vs uniform-metric entropy: with d the exact dimension
    /// at scale eps and N the exact sup-metric covering number of the class
    /// on the d shattered points, 2^d <= N must hold.
    FatEntropy,
    /// Rademacher-to-fat implication: if the exact Rademacher complexity is
    /// <= eps on every size-n point subset of the pool, the pool-restricted
    /// fat dimension at eps is <= n.
    RademacherFat,
    /// Counting bound: 2^d never exceeds the class size.
    FiniteCounting,
}

impl LemmaSuite {
    /// The identifier used on the CLI surface.
    pub fn cli_token(self) -> &'static str {
        match self {
            LemmaSuite::FatEntropy => "lemma1",
            LemmaSuite::RademacherFat => "lemmaB1",
            LemmaSuite::FiniteCounting => "finite_counting",
        }
    }

    pub fn from_cli_token(token: &str) -> Option<Self> {
        match token {
            "lemma1" => Some(LemmaSuite::FatEntropy),
            "lemmaB1" => Some(LemmaSuite::RademacherFat),
            "finite_counting" => Some(LemmaSuite::FiniteCounting),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaReport {
    pub suite: String,
    pub cases: u64,
    pub passes: u64,
    pub failures: u64,
    /// Cases where the implication's premise did not fire (RademacherFat).
    pub vacuous: u64,
    pub seed: u64,
}

struct CaseOutcome {
    pass: bool,
    vacuous: bool,
    detail: String,
}

fn random_class(rng: &mut ChaCha8Rng, max_functions: usize, max_pool: usize) -> FiniteFunctionClass {
    let nf = rng.random_range(1..=max_functions);
    let np = rng.random_range(1..=max_pool);
    let rows: Vec<Vec<f64>> = (0..nf)
        .map(|_| (0..np).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
        .collect();
    FiniteFunctionClass::new(rows, 1.0, "lemma-case").expect("values lie in [-1, 1]")
}

fn fat_entropy_case(rng: &mut ChaCha8Rng) -> Result<CaseOutcome> {
    let class = random_class(rng, 10, 8);
    let eps = 0.05 + rng.random::<f64>() * 0.85;
    let (d, subset, _) = exact_fat_with_subset(&class, eps)?;
    let dist = DistanceMatrix::from_class_on(&class, f64::INFINITY, &subset)?;
    let n_inf = exact_covering(&dist, eps)?;
    let pass = (1u64 << d) <= n_inf as u64;
    Ok(CaseOutcome {
        pass,
        vacuous: false,
        detail: format!("d = {d}, N_inf(eps) at the shattered points = {n_inf}, eps = {eps}"),
    })
}

fn rademacher_fat_case(rng: &mut ChaCha8Rng) -> Result<CaseOutcome> {
    let class = random_class(rng, 8, 6);
    let pool = class.num_points();
    let n = rng.random_range(1..=pool.min(3));
    let mut r_max = 0.0f64;
    let mut err = None;
    for_each_combination(pool, n, &mut |cols| {
        if err.is_some() {
            return;
        }
        match exact_rademacher_on(&class, cols) {
            Ok(r) => r_max = r_max.max(r),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    if r_max <= 0.0 {
        return Ok(CaseOutcome {
            pass: true,
            vacuous: true,
            detail: String::new(),
        });
    }
    // Anchor the random scale around the observed supremum so the premise
    // fires about half the time instead of almost never.
    let eps = r_max * (0.5 + 1.5 * rng.random::<f64>());
    if r_max <= eps {
        let (d, _, _) = exact_fat_with_subset(&class, eps)?;
        Ok(CaseOutcome {
            pass: d <= n,
            vacuous: false,
            detail: format!("sup R_n = {r_max} <= eps = {eps} but fat = {d} > n = {n}"),
        })
    } else {
        Ok(CaseOutcome {
            pass: true,
            vacuous: true,
            detail: String::new(),
        })
    }
}

fn finite_counting_case(rng: &mut ChaCha8Rng) -> Result<CaseOutcome> {
    let class = random_class(rng, 12, 6);
    let eps = 0.05 + rng.random::<f64>() * 0.85;
    let (d, _, _) = exact_fat_with_subset(&class, eps)?;
    let pass = (1u64 << d) <= class.len() as u64;
    Ok(CaseOutcome {
        pass,
        vacuous: false,
        detail: format!("fat = {d} with |F| = {}", class.len()),
    })
}

/// Run `cases` random instances of a suite. Cases use per-index derived
/// seeds and run in parallel; any violated instance aborts with
/// `Error::SuiteViolation` (it would falsify this crate, not the theory).
pub fn lemma_checks(suite: LemmaSuite, seed: u64, cases: u64) -> Result<LemmaReport> {
    let outcomes: Vec<(u64, CaseOutcome)> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = derive_rng(seed, "lemma-case", i);
            let outcome = match suite {
                LemmaSuite::FatEntropy => fat_entropy_case(&mut rng),
                LemmaSuite::RademacherFat => rademacher_fat_case(&mut rng),
                LemmaSuite::FiniteCounting => finite_counting_case(&mut rng),
            };
            outcome.map(|o| (i, o))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = LemmaReport {
        suite: suite.cli_token().to_string(),
        cases,
        passes: 0,
        failures: 0,
        vacuous: 0,
        seed,
    };
    for (i, o) in &outcomes {
        if o.pass {
            report.passes += 1;
            if o.vacuous {
                report.vacuous += 1;
            }
        } else {
            report.failures += 1;
            return Err(Error::SuiteViolation {
                suite: suite.cli_token().to_string(),
                case: *i,
                detail: o.detail.clone(),
            });
        }
    }
    Ok(report)
}
