//! Fat-shattering dimension of finite classes.

use rand::seq::index;

use crate::capacity::witness::{fat_shattering_check, FAT_CHECK_CAP};
use crate::core::{CapacityEstimate, CapacityKind, FiniteFunctionClass};
use crate::error::{Error, Result};
use crate::rng::derive_rng;

/// Caps for the exact mode; the subset search multiplies the check cost by
/// binomial(pool, k).
pub const FAT_EXACT_POOL_CAP: usize = 12;
pub const FAT_EXACT_FUNCTIONS_CAP: usize = 12;

#[derive(Debug, Clone, Copy)]
pub enum FatMode {
    /// True dimension over all point subsets (small instances only).
    Exact,
    /// Lower bound from `budget` random point subsets per candidate size.
    Randomized { budget: u64, seed: u64 },
}

fn floor_log2(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

/// Fat-shattering dimension at scale eps.
///
/// Exact mode returns the true d_F(eps) of the evaluated class; randomized
/// mode returns a lower bound from budgeted random subset search. Both carry
/// the counting upper bound min(n, floor(log2 |F|)) in the diagnostics, and
/// it is the reported upper bound in randomized mode.
pub fn fat_shattering_dimension(
    class: &FiniteFunctionClass,
    eps: f64,
    mode: FatMode,
) -> Result<CapacityEstimate> {
    let n = class.num_points();
    let counting_upper = n.min(floor_log2(class.len()));
    match mode {
        FatMode::Exact => {
            let (d, _, work) = exact_fat_with_subset(class, eps)?;
            Ok(CapacityEstimate::new(
                CapacityKind::Fat,
                eps,
                d as f64,
                d as f64,
                "exact-subset-search",
                0,
                work,
            )?
            .with_diagnostic("counting_upper", counting_upper as f64))
        }
        FatMode::Randomized { budget, seed } => {
            let mut rng = derive_rng(seed, "fat-randomized", 0);
            let mut best = 0usize;
            let mut work = 0u64;
            let size_cap = counting_upper.min(FAT_CHECK_CAP);
            for k in 1..=size_cap {
                let mut found = false;
                if binomial_at_most(n, k, budget) {
                    for_each_combination(n, k, &mut |subset| {
                        if found {
                            return;
                        }
                        if let Ok(check) = fat_shattering_check(class, subset, eps) {
                            work += check.work;
                            found |= check.shattered;
                        }
                    });
                } else {
                    for _ in 0..budget {
                        let mut subset = index::sample(&mut rng, n, k).into_vec();
                        subset.sort_unstable();
                        let check = fat_shattering_check(class, &subset, eps)?;
                        work += check.work;
                        if check.shattered {
                            found = true;
                            break;
                        }
                    }
                }
                if found {
                    best = k;
                } else {
                    break;
                }
            }
            Ok(CapacityEstimate::new(
                CapacityKind::Fat,
                eps,
                best as f64,
                counting_upper as f64,
                "randomized-subsets",
                seed,
                work,
            )?
            .with_diagnostic("counting_upper", counting_upper as f64)
            .with_diagnostic("budget", budget as f64))
        }
    }
}

/// Exact search returning the dimension together with one maximal shattered
/// subset (needed by the lemma suites). Caps apply: the counting bound keeps
/// the subset size at floor(log2 |F|) <= floor(log2 12) < FAT_CHECK_CAP, so
/// the exhaustive enumeration stays exact within the caps.
pub fn exact_fat_with_subset(
    class: &FiniteFunctionClass,
    eps: f64,
) -> Result<(usize, Vec<usize>, u64)> {
    let n = class.num_points();
    if n > FAT_EXACT_POOL_CAP {
        return Err(Error::CapExceeded {
            what: "exact fat dimension pool",
            limit: FAT_EXACT_POOL_CAP,
            actual: n,
        });
    }
    if class.len() > FAT_EXACT_FUNCTIONS_CAP {
        return Err(Error::CapExceeded {
            what: "exact fat dimension class size",
            limit: FAT_EXACT_FUNCTIONS_CAP,
            actual: class.len(),
        });
    }
    let size_cap = n.min(floor_log2(class.len())).min(FAT_CHECK_CAP);
    let mut best: (usize, Vec<usize>) = (0, Vec::new());
    let mut work = 0u64;
    for k in 1..=size_cap {
        let mut found: Option<Vec<usize>> = None;
        let mut err: Option<Error> = None;
        for_each_combination(n, k, &mut |subset| {
            if found.is_some() || err.is_some() {
                return;
            }
            match fat_shattering_check(class, subset, eps) {
                Ok(check) => {
                    work += check.work;
                    if check.shattered {
                        found = Some(subset.to_vec());
                    }
                }
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        match found {
            Some(subset) => best = (k, subset),
            // Shattering is monotone under subsets: if no k-set shatters,
            // no larger set can.
            None => break,
        }
    }
    Ok((best.0, best.1, work))
}

/// Enumerate k-combinations of 0..n in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return;
    }
    loop {
        f(&idx);
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] + (k - i) < n {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// True when binomial(n, k) <= limit, computed without overflow.
fn binomial_at_most(n: usize, k: usize, limit: u64) -> bool {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > limit as u128 {
            return false;
        }
    }
    acc <= limit as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_pattern_class(eps: f64) -> FiniteFunctionClass {
        FiniteFunctionClass::new(
            vec![
                vec![eps, eps],
                vec![eps, -eps],
                vec![-eps, eps],
                vec![-eps, -eps],
            ],
            1.0,
            "patterns",
        )
        .unwrap()
    }

    #[test]
    fn singleton_class_has_dimension_zero() {
        let class = FiniteFunctionClass::new(vec![vec![0.4, -0.1, 0.3]], 1.0, "one").unwrap();
        let est = fat_shattering_dimension(&class, 0.1, FatMode::Exact).unwrap();
        assert_eq!(est.lower, 0.0);
        assert_eq!(est.upper, 0.0);
    }

    #[test]
    fn four_patterns_have_dimension_two() {
        let eps = 0.25;
        let (d, subset, _) = exact_fat_with_subset(&four_pattern_class(eps), eps).unwrap();
        assert_eq!(d, 2);
        assert_eq!(subset, vec![0, 1]);
    }

    #[test]
    fn dimension_never_exceeds_log2_class_size() {
        for seed in 0..20 {
            let mut rng = derive_rng(seed, "fat-test", 0);
            use rand::Rng;
            let nf = rng.random_range(1..=8usize);
            let np = rng.random_range(1..=6usize);
            let rows: Vec<Vec<f64>> = (0..nf)
                .map(|_| (0..np).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
                .collect();
            let class = FiniteFunctionClass::new(rows, 1.0, "rand").unwrap();
            let est = fat_shattering_dimension(&class, 0.2, FatMode::Exact).unwrap();
            assert!(est.lower as usize <= floor_log2(nf));
        }
    }

    #[test]
    fn randomized_mode_is_a_lower_bound_for_exact() {
        for seed in 0..10 {
            let mut rng = derive_rng(seed, "fat-test-rand", 0);
            use rand::Rng;
            let rows: Vec<Vec<f64>> = (0..8)
                .map(|_| (0..8).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
                .collect();
            let class = FiniteFunctionClass::new(rows, 1.0, "rand").unwrap();
            let exact = fat_shattering_dimension(&class, 0.3, FatMode::Exact).unwrap();
            let rand = fat_shattering_dimension(
                &class,
                0.3,
                FatMode::Randomized { budget: 16, seed },
            )
            .unwrap();
            assert!(rand.lower <= exact.lower);
            assert!(rand.lower <= rand.upper);
        }
    }

    #[test]
    fn monotone_in_scale() {
        let class = four_pattern_class(0.25);
        let d_small = fat_shattering_dimension(&class, 0.1, FatMode::Exact)
            .unwrap()
            .lower;
        let d_large = fat_shattering_dimension(&class, 0.3, FatMode::Exact)
            .unwrap()
            .lower;
        assert!(d_small >= d_large);
    }

    #[test]
    fn exact_mode_enforces_caps() {
        let class = FiniteFunctionClass::new(vec![vec![0.0; 13]; 2], 1.0, "wide").unwrap();
        assert!(matches!(
            fat_shattering_dimension(&class, 0.1, FatMode::Exact),
            Err(Error::CapExceeded { .. })
        ));
        let class = FiniteFunctionClass::new(vec![vec![0.0; 2]; 13], 1.0, "tall").unwrap();
        assert!(fat_shattering_dimension(&class, 0.1, FatMode::Exact).is_err());
    }

    #[test]
    fn combination_enumeration_is_complete() {
        let mut seen = Vec::new();
        for_each_combination(5, 3, &mut |c| seen.push(c.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
    }
}
