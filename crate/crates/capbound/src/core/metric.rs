//! Empirical L_p pseudo-metrics on function value vectors.

use crate::error::{param_err, Error, Result};

/// Empirical distance between two functions given by their values on the
/// same n points:
///
/// ```text
/// d_p(f, f') = ((1/n) sum_i |f(t_i) - f'(t_i)|^p)^(1/p)   for p in [1, inf)
/// d_inf(f, f') = max_i |f(t_i) - f'(t_i)|
/// ```
///
/// Pass `f64::INFINITY` for the sup metric. Satisfies d_p <= d_q for p <= q.
pub fn empirical_distance(p: f64, f1: &[f64], f2: &[f64]) -> Result<f64> {
    if f1.len() != f2.len() {
        return Err(Error::LengthMismatch {
            left: f1.len(),
            right: f2.len(),
        });
    }
    if f1.is_empty() {
        return param_err("f1", "need at least one evaluation point");
    }
    if p.is_nan() || p < 1.0 {
        return param_err("p", format!("must satisfy p >= 1, got {p}"));
    }
    let diffs = f1.iter().zip(f2).map(|(a, b)| (a - b).abs());
    if p.is_infinite() {
        Ok(diffs.fold(0.0, f64::max))
    } else if p == 1.0 {
        Ok(diffs.sum::<f64>() / f1.len() as f64)
    } else if p == 2.0 {
        Ok((diffs.map(|d| d * d).sum::<f64>() / f1.len() as f64).sqrt())
    } else {
        Ok((diffs.map(|d| d.powf(p)).sum::<f64>() / f1.len() as f64).powf(1.0 / p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let a = [0.2, 0.0];
        let b = [0.0, 0.2];
        assert_eq!(empirical_distance(1.0, &a, &b).unwrap(), 0.2);
        assert_eq!(empirical_distance(f64::INFINITY, &a, &b).unwrap(), 0.2);
        let c = [0.3, 0.4];
        let z = [0.0, 0.0];
        let d2 = empirical_distance(2.0, &c, &z).unwrap();
        assert!((d2 - 0.125f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(empirical_distance(1.0, &[0.0], &[0.0, 1.0]).is_err());
        assert!(empirical_distance(0.5, &[0.0], &[1.0]).is_err());
        assert!(empirical_distance(1.0, &[], &[]).is_err());
    }

    #[test]
    fn identical_vectors_have_zero_distance() {
        let v = [0.4, -0.2, 0.9];
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(empirical_distance(p, &v, &v).unwrap(), 0.0);
        }
    }
}
