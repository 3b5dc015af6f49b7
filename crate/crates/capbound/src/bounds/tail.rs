//! Tail bounds on the uniform deviation between margin risk and empirical
//! margin risk, for independent and for stationary beta-mixing samples.

use crate::bounds::report::{flag, BoundReport};
use crate::bounds::{EntropyFn, MixingCoeff};
use crate::error::{param_err, precondition, Result};

fn check_eps_gamma(eps: f64, gamma: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return param_err("eps", format!("must lie in (0, 1), got {eps}"));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return param_err("gamma", format!("must lie in (0, 1], got {gamma}"));
    }
    Ok(())
}

/// Upper bound on P(sup_g (L_gamma(g) - L_{gamma,n}(g)) > eps) for n
/// independent draws:
///
/// ```text
/// 2 N_1(eps gamma / 8, F, 2n) exp(-n eps^2 / 32),   n > 2/eps^2
/// ```
///
/// `entropy` supplies ln N_1 at the displayed scale and sample size 2n.
/// Flagged informative exactly when the value drops below 1.
pub fn iid_deviation_bound(n: u64, eps: f64, gamma: f64, entropy: &EntropyFn) -> Result<BoundReport> {
    check_eps_gamma(eps, gamma)?;
    let threshold = 2.0 / (eps * eps);
    if !(n as f64 > threshold) {
        return precondition(format!(
            "n > 2/eps^2 required (n = {n}, 2/eps^2 = {threshold})"
        ));
    }
    let ent = entropy.eval(eps * gamma / 8.0, 2 * n);
    if !(ent >= 0.0) {
        return param_err("entropy", format!("must be nonnegative, got {ent}"));
    }
    let exponent = ent - n as f64 * eps * eps / 32.0;
    let value = 2.0 * exponent.exp();
    Ok(BoundReport::new("thm1", value)
        .with_flag_if(value < 1.0, flag::INFORMATIVE)
        .with_flag_if(value >= 1.0, flag::UNINFORMATIVE)
        .with_diagnostic("entropy", ent)
        .with_diagnostic("exponent", exponent)
        .with_diagnostic("covering_scale", eps * gamma / 8.0))
}

/// The same tail for a stationary beta-mixing sample split into 2 b_n
/// alternating blocks of length a_n (so n = 2 a_n b_n):
///
/// ```text
/// 4 N_1(eps gamma / 16, F, 2n) exp(-b_n eps^2 / 32) + 2 b_n beta(a_n)
/// ```
///
/// requiring b_n > 2 / (eps^2 a_n). With beta == 0 this is exactly twice
/// the independent-case expression evaluated with b_n in place of n and the
/// covering scale halved.
pub fn mixing_deviation_bound(
    b_n: u64,
    a_n: u64,
    eps: f64,
    gamma: f64,
    beta: &MixingCoeff,
    entropy: &EntropyFn,
) -> Result<BoundReport> {
    check_eps_gamma(eps, gamma)?;
    if a_n == 0 || b_n == 0 {
        return param_err("a_n", "block sizes must be >= 1");
    }
    let threshold = 2.0 / (eps * eps * a_n as f64);
    if !(b_n as f64 > threshold) {
        return precondition(format!(
            "b_n > 2/(eps^2 a_n) required (b_n = {b_n}, 2/(eps^2 a_n) = {threshold})"
        ));
    }
    let n = 2 * a_n * b_n;
    let ent = entropy.eval(eps * gamma / 16.0, 2 * n);
    if !(ent >= 0.0) {
        return param_err("entropy", format!("must be nonnegative, got {ent}"));
    }
    let beta_value = beta.eval(a_n);
    if !(beta_value >= 0.0) {
        return param_err("beta", format!("must be nonnegative, got {beta_value}"));
    }
    let exponent = ent - b_n as f64 * eps * eps / 32.0;
    let block_term = 4.0 * exponent.exp();
    let beta_term = 2.0 * b_n as f64 * beta_value;
    let value = block_term + beta_term;
    Ok(BoundReport::new("mixing", value)
        .with_flag_if(value < 1.0, flag::INFORMATIVE)
        .with_flag_if(value >= 1.0, flag::UNINFORMATIVE)
        .with_diagnostic("entropy", ent)
        .with_diagnostic("block_term", block_term)
        .with_diagnostic("beta_term", beta_term)
        .with_diagnostic("beta_at_a_n", beta_value)
        .with_diagnostic("n", n as f64)
        .with_diagnostic("covering_scale", eps * gamma / 16.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iid_bound_spot_value() {
        // entropy 0, n = 32/eps^2 (eps = 0.1 -> n = 3200): 2/e
        let r = iid_deviation_bound(3200, 0.1, 0.5, &EntropyFn::zero()).unwrap();
        assert!((r.value - 0.7357588823428846).abs() < 1e-12);
        assert!(r.has_flag(flag::INFORMATIVE));
    }

    #[test]
    fn iid_bound_decreases_in_n() {
        let ent = EntropyFn::constant(1.5);
        let mut prev = f64::INFINITY;
        for n in [300u64, 1000, 3000, 10000, 100000] {
            let v = iid_deviation_bound(n, 0.1, 1.0, &ent).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn iid_bound_enforces_sample_floor() {
        let err = iid_deviation_bound(199, 0.1, 1.0, &EntropyFn::zero());
        assert!(err.is_err());
        let msg = format!("{}", err.unwrap_err());
        assert!(msg.contains("n > 2/eps^2"), "{msg}");
    }

    #[test]
    fn mixing_bound_spot_value() {
        // entropy 0, eps = 0.5 so b_n = 128, rho = 0.5, a_n = 10:
        // 4/e + 2 * 128 * 0.5^10
        let beta = MixingCoeff::geometric(0.5).unwrap();
        let r = mixing_deviation_bound(128, 10, 0.5, 1.0, &beta, &EntropyFn::zero()).unwrap();
        assert!((r.value - 1.7215177646857693).abs() < 1e-12);
    }

    #[test]
    fn zero_beta_reduces_to_block_term() {
        let ent = EntropyFn::constant(0.7);
        let r =
            mixing_deviation_bound(300, 4, 0.3, 1.0, &MixingCoeff::zero(), &ent).unwrap();
        assert_eq!(r.diagnostics["beta_term"], 0.0);
        assert_eq!(r.value, r.diagnostics["block_term"]);
    }

    #[test]
    fn zero_beta_matches_twice_the_iid_structure() {
        // With beta == 0, the mixing bound evaluated at (b_n, a_n) must be
        // exactly 2x the iid bound at n := b_n once the entropy handle is
        // rescaled for the halved covering scale and the 2 a_n-fold larger
        // sample argument. Exact equality in floating point is intended.
        let h = EntropyFn::new(|s, n| 0.3 / s + (n as f64).ln() * 0.01);
        let (b_n, a_n, eps, gamma) = (4000u64, 8u64, 0.2, 0.5);
        let mixing =
            mixing_deviation_bound(b_n, a_n, eps, gamma, &MixingCoeff::zero(), &h).unwrap();
        let wrapped = EntropyFn::new(move |s, m| h.eval(s / 2.0, m * 2 * a_n));
        let iid = iid_deviation_bound(b_n, eps, gamma, &wrapped).unwrap();
        assert_eq!(mixing.value, 2.0 * iid.value);
    }

    #[test]
    fn larger_blocks_shrink_the_beta_term() {
        let beta = MixingCoeff::geometric(0.8).unwrap();
        let ent = EntropyFn::zero();
        // fixed n = 2 a b: grow a, shrink b accordingly
        let v1 = mixing_deviation_bound(512, 4, 0.5, 1.0, &beta, &ent)
            .unwrap()
            .diagnostics["beta_term"];
        let v2 = mixing_deviation_bound(256, 8, 0.5, 1.0, &beta, &ent)
            .unwrap()
            .diagnostics["beta_term"];
        assert!(v2 < v1);
    }

    #[test]
    fn mixing_bound_enforces_block_floor() {
        let err = mixing_deviation_bound(
            1,
            1,
            0.5,
            1.0,
            &MixingCoeff::zero(),
            &EntropyFn::zero(),
        );
        assert!(err.is_err());
        assert!(format!("{}", err.unwrap_err()).contains("b_n > 2/(eps^2 a_n)"));
    }
}
