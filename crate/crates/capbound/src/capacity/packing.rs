//! Packing and covering numbers of finite classes.
//!
//! Conventions: a proper eps-net picks its centers inside the class and
//! covers with the strict inequality rho(f, fbar) < eps; packing uses
//! separation >= eps. A maximal eps-separated set is therefore also a
//! proper eps-net, which yields the sandwich M(2 eps) <= N(eps) <= M(eps).

use crate::capacity::DistanceMatrix;
use crate::core::{CapacityEstimate, CapacityKind};
use crate::error::{param_err, Error, Result};

/// Largest class size for which the exact covering search is attempted; the
/// search is exponential in the class size.
pub const EXACT_COVER_CAP: usize = 15;

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return param_err("eps", format!("must be positive, got {eps}"));
    }
    Ok(())
}

fn greedy_separated(dist: &DistanceMatrix, eps: f64) -> (usize, u64) {
    let mut kept: Vec<usize> = Vec::new();
    let mut work = 0u64;
    for i in 0..dist.len() {
        let mut separated = true;
        for &j in &kept {
            work += 1;
            if dist.get(i, j) < eps {
                separated = false;
                break;
            }
        }
        if separated {
            kept.push(i);
        }
    }
    (kept.len(), work)
}

/// Greedy (insertion-order) maximal eps-separated subset.
///
/// The returned size m is a lower bound on the packing number M(eps) and,
/// because a maximal separated set is a proper eps-net, an upper bound on
/// the covering number N(eps). The diagnostics also carry the greedy count
/// at scale 2 eps, a lower bound on N(eps) through the sandwich.
pub fn greedy_packing(dist: &DistanceMatrix, eps: f64) -> Result<CapacityEstimate> {
    check_eps(eps)?;
    let (m, work1) = greedy_separated(dist, eps);
    let (m2, work2) = greedy_separated(dist, 2.0 * eps);
    Ok(CapacityEstimate::new(
        CapacityKind::Packing,
        eps,
        m as f64,
        f64::INFINITY,
        "greedy-insertion",
        0,
        work1 + work2,
    )?
    .with_diagnostic("covering_upper", m as f64)
    .with_diagnostic("covering_lower", m2 as f64)
    .with_diagnostic("separated_at_2eps", m2 as f64))
}

/// Exact minimum number of centers from the class whose strict-eps balls
/// cover it, by exhaustive search over increasing cardinality.
pub fn exact_covering(dist: &DistanceMatrix, eps: f64) -> Result<usize> {
    check_eps(eps)?;
    let n = dist.len();
    if n > EXACT_COVER_CAP {
        return Err(Error::CapExceeded {
            what: "exact covering",
            limit: EXACT_COVER_CAP,
            actual: n,
        });
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let balls: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| dist.get(i, j) < eps)
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    for k in 1..=n {
        if combination_covers(&balls, full, k, 0, 0) {
            return Ok(k);
        }
    }
    // Every center covers at least itself, so k = n always succeeds.
    unreachable!("cover of size n always exists");
}

fn combination_covers(balls: &[u32], full: u32, remaining: usize, start: usize, acc: u32) -> bool {
    if acc == full {
        return true;
    }
    if remaining == 0 || start >= balls.len() {
        return false;
    }
    // Not enough slots left to pick remaining centers.
    if balls.len() - start < remaining {
        return false;
    }
    for i in start..balls.len() {
        if combination_covers(balls, full, remaining - 1, i + 1, acc | balls[i]) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::FiniteFunctionClass;

    fn constants_class(values: &[f64], bound: f64) -> DistanceMatrix {
        let rows = values.iter().map(|&v| vec![v]).collect();
        let class = FiniteFunctionClass::new(rows, bound, "constants").unwrap();
        DistanceMatrix::from_class(&class, f64::INFINITY).unwrap()
    }

    #[test]
    fn greedy_on_identical_points() {
        let class = FiniteFunctionClass::new(vec![vec![0.3]; 5], 1.0, "same").unwrap();
        let dist = DistanceMatrix::from_class(&class, 1.0).unwrap();
        let est = greedy_packing(&dist, 0.4).unwrap();
        assert_eq!(est.lower, 1.0);
    }

    #[test]
    fn greedy_separates_two_distant_functions() {
        let dist = constants_class(&[0.0, 0.5], 1.0);
        let est = greedy_packing(&dist, 0.4).unwrap();
        assert_eq!(est.lower, 2.0);
        assert_eq!(est.diagnostics["covering_upper"], 2.0);
    }

    #[test]
    fn exact_covering_of_three_constants() {
        let dist = constants_class(&[0.0, 1.0, 2.0], 2.0);
        // center 1 covers both neighbours strictly within 1.5
        assert_eq!(exact_covering(&dist, 1.5).unwrap(), 1);
        // no two constants are within < 0.5 of each other
        assert_eq!(exact_covering(&dist, 0.5).unwrap(), 3);
    }

    #[test]
    fn singleton_needs_one_center() {
        let dist = constants_class(&[0.7], 1.0);
        assert_eq!(exact_covering(&dist, 0.1).unwrap(), 1);
    }

    #[test]
    fn strictness_matters_at_the_boundary() {
        // distance exactly 1.0 is NOT covered at eps = 1.0 (strict net)
        let dist = constants_class(&[0.0, 1.0], 1.0);
        assert_eq!(exact_covering(&dist, 1.0).unwrap(), 2);
        assert_eq!(exact_covering(&dist, 1.0 + 1e-9).unwrap(), 1);
    }

    #[test]
    fn covering_cap_is_enforced() {
        let class = FiniteFunctionClass::new(vec![vec![0.0]; 16], 1.0, "big").unwrap();
        let dist = DistanceMatrix::from_class(&class, 1.0).unwrap();
        assert!(matches!(
            exact_covering(&dist, 0.5),
            Err(Error::CapExceeded { .. })
        ));
    }
}
