//! Margin risks: the expectation L_gamma(g) = E[phi_gamma(f_{g,gamma}(Z))]
//! and its empirical counterpart. Distributions live on cell centers, so
//! the expectation is a finite sum and exact.

use crate::core::{truncate, truncated_hinge_loss, DistributionSpec, MultiClassTuple};
use crate::error::{Error, Result};
use crate::experiments::LabeledSample;

fn check_geometry(g: &MultiClassTuple, dist: &DistributionSpec) -> Result<()> {
    let (d, a, res, _) = g.geometry();
    if d != dist.dim()
        || a != dist.side()
        || res != dist.resolution()
        || g.num_classes() != dist.num_classes()
    {
        return Err(Error::GeometryMismatch(format!(
            "class tuple (d={d}, A={a}, G={res}, C={}) vs distribution (d={}, A={}, G={}, C={})",
            g.num_classes(),
            dist.dim(),
            dist.side(),
            dist.resolution(),
            dist.num_classes()
        )));
    }
    Ok(())
}

/// Exact margin risk by enumeration over all (cell, label) atoms.
pub fn exact_risk(g: &MultiClassTuple, gamma: f64, dist: &DistributionSpec) -> Result<f64> {
    check_geometry(g, dist)?;
    let mut risk = 0.0;
    for cell in 0..dist.num_cells() {
        let p_cell = dist.cell_probs()[cell];
        if p_cell == 0.0 {
            continue;
        }
        for (label0, &p_label) in dist.label_probs(cell).iter().enumerate() {
            if p_label == 0.0 {
                continue;
            }
            let m = truncate(g.margin_at_cell(cell, label0 + 1)?, gamma);
            risk += p_cell * p_label * truncated_hinge_loss(m, gamma)?;
        }
    }
    Ok(risk)
}

/// Empirical margin risk (1/n) sum_i phi_gamma(f_{g,gamma}(Z_i)).
pub fn empirical_risk(g: &MultiClassTuple, gamma: f64, sample: &LabeledSample) -> Result<f64> {
    if sample.is_empty() {
        return crate::error::param_err("sample", "need at least one point");
    }
    let mut total = 0.0;
    for i in 0..sample.len() {
        let m = truncate(
            crate::core::margin(g, sample.point(i), sample.labels()[i])?,
            gamma,
        );
        total += truncated_hinge_loss(m, gamma)?;
    }
    Ok(total / sample.len() as f64)
}

/// Hot-path variant over precomputed cell indices.
pub(crate) fn empirical_risk_on_cells(
    g: &MultiClassTuple,
    gamma: f64,
    cells: &[usize],
    labels: &[usize],
) -> Result<f64> {
    debug_assert_eq!(cells.len(), labels.len());
    let mut total = 0.0;
    for (&cell, &y) in cells.iter().zip(labels) {
        let m = truncate(g.margin_at_cell(cell, y)?, gamma);
        total += truncated_hinge_loss(m, gamma)?;
    }
    Ok(total / cells.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{random_tuples, GridBVFunction};
    use crate::experiments::sample_iid;

    fn tuple_from_values(values: &[Vec<f64>], resolution: usize) -> MultiClassTuple {
        let comps = values
            .iter()
            .map(|v| GridBVFunction::new(1, 1.0, resolution, 1.0, v.clone()).unwrap())
            .collect();
        MultiClassTuple::new(comps).unwrap()
    }

    #[test]
    fn point_mass_risk_is_a_single_loss_value() {
        let g = tuple_from_values(&[vec![0.9], vec![0.1], vec![0.3]], 1);
        let dist = DistributionSpec::new(
            1,
            1.0,
            1,
            3,
            vec![1.0],
            vec![vec![0.0, 1.0, 0.0]],
            None,
        )
        .unwrap();
        // margin for label 2 is (0.1 - 0.9)/2 = -0.4, loss 1
        assert_eq!(exact_risk(&g, 0.5, &dist).unwrap(), 1.0);
    }

    #[test]
    fn identical_components_give_risk_one() {
        // margin is identically zero, loss identically one; only the
        // probability weights round.
        let g = tuple_from_values(&vec![vec![0.4, 0.6]; 3], 2);
        let dist = DistributionSpec::uniform(1, 1.0, 2, 3).unwrap();
        assert!((exact_risk(&g, 0.5, &dist).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometry_mismatch_is_rejected() {
        let g = tuple_from_values(&vec![vec![0.4, 0.6]; 3], 2);
        let dist = DistributionSpec::uniform(1, 1.0, 4, 3).unwrap();
        assert!(matches!(
            exact_risk(&g, 0.5, &dist),
            Err(Error::GeometryMismatch(_))
        ));
    }

    #[test]
    fn single_point_empirical_risk() {
        let g = tuple_from_values(&[vec![0.9], vec![0.1], vec![0.3]], 1);
        let dist = DistributionSpec::new(
            1,
            1.0,
            1,
            3,
            vec![1.0],
            vec![vec![1.0, 0.0, 0.0]],
            None,
        )
        .unwrap();
        let s = sample_iid(&dist, 1, 3).unwrap();
        // margin for label 1 is 0.3, gamma 0.5: loss 1 - 0.3/0.5 = 0.4
        let r = empirical_risk(&g, 0.5, &s).unwrap();
        assert!((r - 0.4).abs() < 1e-15);
    }

    #[test]
    fn full_support_enumeration_matches_exact_risk_under_uniform_law() {
        // Visiting every (cell, label) atom exactly once with uniform
        // weights is the uniform expectation itself.
        let g = random_tuples(1, 3, 1, 1.0, 4, 1.0, 2.0, 5).unwrap().remove(0);
        let dist = DistributionSpec::uniform(1, 1.0, 4, 3).unwrap();
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for cell in 0..4 {
            for y in 1..=3 {
                points.extend_from_slice(&dist.cell_center(cell));
                labels.push(y);
            }
        }
        let sample = LabeledSample::new(
            1,
            3,
            points,
            labels,
            crate::experiments::SampleMeta {
                seed: 0,
                rho: 0.0,
                spec_hash: dist.content_hash(),
            },
        )
        .unwrap();
        let emp = empirical_risk(&g, 0.5, &sample).unwrap();
        let exact = exact_risk(&g, 0.5, &dist).unwrap();
        assert!((emp - exact).abs() < 1e-12);
    }

    #[test]
    fn exact_and_empirical_agree_on_a_large_smoke_sample() {
        let g = random_tuples(1, 3, 1, 1.0, 8, 1.0, 2.0, 11).unwrap().remove(0);
        let dist = DistributionSpec::uniform(1, 1.0, 8, 3).unwrap();
        let n = 1_000_000;
        let s = sample_iid(&dist, n, 23).unwrap();
        let emp = empirical_risk(&g, 0.5, &s).unwrap();
        let exact = exact_risk(&g, 0.5, &dist).unwrap();
        // Hoeffding-style tolerance 4 sqrt(1/(4n))
        assert!((emp - exact).abs() <= 4.0 * (0.25 / n as f64).sqrt());
    }

    #[test]
    fn risks_stay_in_unit_interval() {
        for seed in 0..5 {
            let g = random_tuples(1, 4, 2, 1.0, 3, 1.0, 3.0, seed).unwrap().remove(0);
            let dist = DistributionSpec::uniform(2, 1.0, 3, 4).unwrap();
            let r = exact_risk(&g, 0.25, &dist).unwrap();
            assert!((0.0..=1.0).contains(&r));
            let s = sample_iid(&dist, 100, seed).unwrap();
            let e = empirical_risk(&g, 0.25, &s).unwrap();
            assert!((0.0..=1.0).contains(&e));
        }
    }

    #[test]
    fn relabeling_classes_consistently_preserves_both_risks() {
        let g = random_tuples(1, 3, 1, 1.0, 4, 1.0, 2.0, 31).unwrap().remove(0);
        let dist = DistributionSpec::new(
            1,
            1.0,
            4,
            3,
            vec![0.1, 0.2, 0.3, 0.4],
            vec![
                vec![0.5, 0.25, 0.25],
                vec![0.2, 0.5, 0.3],
                vec![0.1, 0.1, 0.8],
                vec![1.0, 0.0, 0.0],
            ],
            None,
        )
        .unwrap();
        let perm = [2usize, 0, 1];
        let comps = g.components();
        let permuted = MultiClassTuple::new({
            let mut v = vec![comps[0].clone(); 3];
            for (old, &new) in perm.iter().enumerate() {
                v[new] = comps[old].clone();
            }
            v
        })
        .unwrap();
        let rd = dist.relabeled(&perm).unwrap();
        let a = exact_risk(&g, 0.5, &dist).unwrap();
        let b = exact_risk(&permuted, 0.5, &rd).unwrap();
        assert!((a - b).abs() < 1e-15);

        // empirical counterpart: relabel the sample labels the same way
        let sample = sample_iid(&dist, 500, 8).unwrap();
        let relabeled_sample = LabeledSample::new(
            sample.dim(),
            sample.num_classes(),
            (0..sample.len()).flat_map(|i| sample.point(i).to_vec()).collect(),
            sample.labels().iter().map(|&y| perm[y - 1] + 1).collect(),
            *sample.meta(),
        )
        .unwrap();
        let e1 = empirical_risk(&g, 0.5, &sample).unwrap();
        let e2 = empirical_risk(&permuted, 0.5, &relabeled_sample).unwrap();
        assert_eq!(e1, e2);
    }
}
