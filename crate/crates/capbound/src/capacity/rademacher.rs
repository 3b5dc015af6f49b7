//! Empirical Rademacher complexity of finite classes.
//!
//! R_n(F) = E_sigma sup_{f in F} (1/n) sum_i sigma_i f(t_i), the expectation
//! over uniform sign vectors. Always nonnegative for nonempty F, since the
//! supremum dominates the (centered) average of any single member.

use rand::Rng;

use crate::core::{CapacityEstimate, CapacityKind, FiniteFunctionClass};
use crate::error::{param_err, Error, Result};
use crate::rng::derive_rng;

/// Exact enumeration walks all 2^n sign vectors.
pub const RADEMACHER_EXACT_CAP: usize = 20;

#[derive(Debug, Clone, Copy)]
pub enum RademacherMode {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

fn sup_over_class(class: &FiniteFunctionClass, cols: &[usize], signs: u32) -> f64 {
    let n = cols.len() as f64;
    let mut best = f64::NEG_INFINITY;
    for f in 0..class.len() {
        let mut sum = 0.0;
        for (i, &c) in cols.iter().enumerate() {
            let v = class.value(f, c);
            if signs >> i & 1 == 1 {
                sum += v;
            } else {
                sum -= v;
            }
        }
        if sum > best {
            best = sum;
        }
    }
    best / n
}

/// Exact empirical Rademacher complexity restricted to a column subset.
/// Sign vectors are visited in complement pairs so the two halves cancel
/// exactly for symmetric classes.
pub fn exact_rademacher_on(class: &FiniteFunctionClass, cols: &[usize]) -> Result<f64> {
    let n = cols.len();
    if n == 0 {
        return param_err("cols", "need at least one point");
    }
    if n > RADEMACHER_EXACT_CAP {
        return Err(Error::CapExceeded {
            what: "exact Rademacher points",
            limit: RADEMACHER_EXACT_CAP,
            actual: n,
        });
    }
    for &c in cols {
        if c >= class.num_points() {
            return param_err("cols", format!("column {c} out of range"));
        }
    }
    let half = 1u64 << (n - 1);
    let all = (1u32 << n) - 1;
    let mut acc = 0.0;
    for signs in 0..half {
        let s = signs as u32;
        acc += sup_over_class(class, cols, s) + sup_over_class(class, cols, all ^ s);
    }
    Ok(acc / (1u64 << n) as f64)
}

/// Empirical Rademacher complexity over all points of the class.
///
/// Monte Carlo mode reports mean and standard error in the diagnostics and
/// encloses the estimate as [max(0, mean - se), mean + se]; the lower end is
/// clamped at zero because the true quantity is nonnegative.
pub fn rademacher_complexity(
    class: &FiniteFunctionClass,
    mode: RademacherMode,
) -> Result<CapacityEstimate> {
    let cols: Vec<usize> = (0..class.num_points()).collect();
    match mode {
        RademacherMode::Exact => {
            let value = exact_rademacher_on(class, &cols)?.max(0.0);
            Ok(CapacityEstimate::new(
                CapacityKind::Rademacher,
                0.0,
                value,
                value,
                "exact-enumeration",
                0,
                1u64 << cols.len(),
            )?)
        }
        RademacherMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return param_err("trials", "must be >= 1");
            }
            let n = cols.len();
            if n > 32 {
                return param_err("class", "Monte Carlo mode supports up to 32 points");
            }
            let mut rng = derive_rng(seed, "rademacher-mc", 0);
            let mut draws = Vec::with_capacity(trials as usize);
            for _ in 0..trials {
                let signs: u32 = rng.random::<u32>() & ((1u64 << n) as u32).wrapping_sub(1);
                draws.push(sup_over_class(class, &cols, signs));
            }
            let mean = draws.iter().sum::<f64>() / trials as f64;
            let se = if trials >= 2 {
                let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                    / (trials - 1) as f64;
                (var / trials as f64).sqrt()
            } else {
                0.0
            };
            let lower = (mean - se).max(0.0);
            let upper = (mean + se).max(lower);
            Ok(CapacityEstimate::new(
                CapacityKind::Rademacher,
                0.0,
                lower,
                upper,
                "monte-carlo",
                seed,
                trials,
            )?
            .with_diagnostic("mean", mean)
            .with_diagnostic("std_error", se)
            .with_diagnostic("trials", trials as f64))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_class_has_zero_complexity() {
        let class =
            FiniteFunctionClass::new(vec![vec![0.7, -0.3, 0.1, 0.9]], 1.0, "one").unwrap();
        let est = rademacher_complexity(&class, RademacherMode::Exact).unwrap();
        assert_eq!(est.lower, 0.0);
        assert_eq!(est.upper, 0.0);
    }

    #[test]
    fn sign_pair_of_constants_give_c() {
        // {+c, -c} on one point: sup sigma (+-c) = c for both signs.
        let c = 0.6;
        let class = FiniteFunctionClass::new(vec![vec![c], vec![-c]], 1.0, "pm").unwrap();
        let est = rademacher_complexity(&class, RademacherMode::Exact).unwrap();
        assert_eq!(est.lower, c);
    }

    #[test]
    fn union_with_negation_does_not_decrease() {
        let mut rng = derive_rng(5, "rad-test", 0);
        for _ in 0..10 {
            let rows: Vec<Vec<f64>> = (0..4)
                .map(|_| (0..5).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
                .collect();
            let class = FiniteFunctionClass::new(rows, 1.0, "rand").unwrap();
            let base = rademacher_complexity(&class, RademacherMode::Exact).unwrap();
            let sym = rademacher_complexity(&class.union_with_negation(), RademacherMode::Exact)
                .unwrap();
            assert!(sym.lower >= base.lower - 1e-12);
        }
    }

    #[test]
    fn monte_carlo_tracks_exact_within_three_standard_errors() {
        let mut rng = derive_rng(11, "rad-mc-test", 0);
        for case in 0..10 {
            let rows: Vec<Vec<f64>> = (0..5)
                .map(|_| (0..5).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
                .collect();
            let class = FiniteFunctionClass::new(rows, 1.0, "rand").unwrap();
            let exact = rademacher_complexity(&class, RademacherMode::Exact)
                .unwrap()
                .lower;
            let mc = rademacher_complexity(
                &class,
                RademacherMode::MonteCarlo {
                    trials: 4000,
                    seed: case,
                },
            )
            .unwrap();
            let mean = mc.diagnostics["mean"];
            let se = mc.diagnostics["std_error"];
            assert!(
                (mean - exact).abs() <= 3.0 * se.max(1e-12),
                "case {case}: mc {mean} vs exact {exact} (se {se})"
            );
        }
    }

    #[test]
    fn exact_cap_is_enforced() {
        let class = FiniteFunctionClass::new(vec![vec![0.0; 21]; 2], 1.0, "wide").unwrap();
        assert!(matches!(
            rademacher_complexity(&class, RademacherMode::Exact),
            Err(Error::CapExceeded { .. })
        ));
    }
}
