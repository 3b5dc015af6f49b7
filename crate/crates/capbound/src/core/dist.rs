//! Discrete data-generating distributions on grid-cell centers.
//!
//! Supporting the law on cell centers keeps every expectation a finite sum,
//! so exact risks need no quadrature. An optional stay-probability `rho`
//! turns the i.i.d. source into a stationary first-order Markov chain.

use serde::{Deserialize, Serialize};

use crate::core::grid::cell_center;
use crate::error::{param_err, Error, Result};
use crate::rng::fnv1a64;

const PROB_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistRepr", into = "DistRepr")]
pub struct DistributionSpec {
    dim: usize,
    side: f64,
    resolution: usize,
    num_classes: usize,
    cell_probs: Vec<f64>,
    label_probs: Vec<Vec<f64>>,
    mixing: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistRepr {
    d: usize,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "G")]
    g: usize,
    #[serde(rename = "C")]
    c: usize,
    cell_probs: Vec<f64>,
    label_probs: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mixing: Option<f64>,
}

impl TryFrom<DistRepr> for DistributionSpec {
    type Error = Error;
    fn try_from(r: DistRepr) -> Result<Self> {
        DistributionSpec::new(r.d, r.a, r.g, r.c, r.cell_probs, r.label_probs, r.mixing)
    }
}

impl From<DistributionSpec> for DistRepr {
    fn from(s: DistributionSpec) -> Self {
        DistRepr {
            d: s.dim,
            a: s.side,
            g: s.resolution,
            c: s.num_classes,
            cell_probs: s.cell_probs,
            label_probs: s.label_probs,
            mixing: s.mixing,
        }
    }
}

impl DistributionSpec {
    pub fn new(
        dim: usize,
        side: f64,
        resolution: usize,
        num_classes: usize,
        cell_probs: Vec<f64>,
        label_probs: Vec<Vec<f64>>,
        mixing: Option<f64>,
    ) -> Result<Self> {
        if dim == 0 || resolution == 0 {
            return param_err("dist", "d and G must be >= 1");
        }
        if num_classes == 0 {
            return param_err("dist", "C must be >= 1");
        }
        if !(side > 0.0) || !side.is_finite() {
            return param_err("dist", format!("A must be positive, got {side}"));
        }
        let cells = (resolution as u128)
            .checked_pow(dim as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or(Error::Parameter {
                name: "dist",
                reason: "G^d too large".to_string(),
            })? as usize;
        if cell_probs.len() != cells {
            return Err(Error::LengthMismatch {
                left: cell_probs.len(),
                right: cells,
            });
        }
        if label_probs.len() != cells {
            return Err(Error::LengthMismatch {
                left: label_probs.len(),
                right: cells,
            });
        }
        check_simplex("cell_probs", &cell_probs)?;
        for (i, row) in label_probs.iter().enumerate() {
            if row.len() != num_classes {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: num_classes,
                });
            }
            check_simplex("label_probs", row).map_err(|_| Error::Parameter {
                name: "dist",
                reason: format!("label_probs[{i}] is not a probability vector"),
            })?;
        }
        if let Some(rho) = mixing {
            if !(0.0..1.0).contains(&rho) {
                return param_err("dist", format!("rho must lie in [0, 1), got {rho}"));
            }
        }
        Ok(DistributionSpec {
            dim,
            side,
            resolution,
            num_classes,
            cell_probs,
            label_probs,
            mixing,
        })
    }

    /// Uniform cells, uniform labels, no mixing.
    pub fn uniform(dim: usize, side: f64, resolution: usize, num_classes: usize) -> Result<Self> {
        let cells = (resolution as u128)
            .checked_pow(dim as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or(Error::Parameter {
                name: "dist",
                reason: "G^d too large".to_string(),
            })? as usize;
        let cp = vec![1.0 / cells as f64; cells];
        let lp = vec![vec![1.0 / num_classes as f64; num_classes]; cells];
        Self::new(dim, side, resolution, num_classes, cp, lp, None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn num_cells(&self) -> usize {
        self.cell_probs.len()
    }

    pub fn cell_probs(&self) -> &[f64] {
        &self.cell_probs
    }

    pub fn label_probs(&self, cell: usize) -> &[f64] {
        &self.label_probs[cell]
    }

    pub fn mixing(&self) -> Option<f64> {
        self.mixing
    }

    pub fn cell_center(&self, cell: usize) -> Vec<f64> {
        cell_center(self.dim, self.side, self.resolution, cell)
    }

    /// Joint probability of the pair (cell, 1-based label).
    pub fn joint_prob(&self, cell: usize, label: usize) -> f64 {
        self.cell_probs[cell] * self.label_probs[cell][label - 1]
    }

    /// Collision probability sum_z p_z^2 over joint (cell, label) atoms.
    /// This is the chance that a fresh draw repeats the current state.
    pub fn collision_prob(&self) -> f64 {
        (0..self.num_cells())
            .map(|cell| {
                (1..=self.num_classes)
                    .map(|y| self.joint_prob(cell, y).powi(2))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Stable content hash for sample metadata.
    pub fn content_hash(&self) -> u64 {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&(self.dim as u64).to_le_bytes());
        bytes.extend_from_slice(&self.side.to_le_bytes());
        bytes.extend_from_slice(&(self.resolution as u64).to_le_bytes());
        bytes.extend_from_slice(&(self.num_classes as u64).to_le_bytes());
        for &p in &self.cell_probs {
            bytes.extend_from_slice(&p.to_le_bytes());
        }
        for row in &self.label_probs {
            for &p in row {
                bytes.extend_from_slice(&p.to_le_bytes());
            }
        }
        if let Some(rho) = self.mixing {
            bytes.extend_from_slice(&rho.to_le_bytes());
        }
        fnv1a64(&bytes)
    }

    /// Relabel classes by a permutation `perm` (`perm[k]` is the new 0-based
    /// index of old class k+1). Used by the relabeling-invariance checks.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.num_classes {
            return Err(Error::LengthMismatch {
                left: perm.len(),
                right: self.num_classes,
            });
        }
        let label_probs = self
            .label_probs
            .iter()
            .map(|row| {
                let mut out = vec![0.0; row.len()];
                for (old, &new) in perm.iter().enumerate() {
                    out[new] = row[old];
                }
                out
            })
            .collect();
        DistributionSpec::new(
            self.dim,
            self.side,
            self.resolution,
            self.num_classes,
            self.cell_probs.clone(),
            label_probs,
            self.mixing,
        )
    }
}

fn check_simplex(name: &'static str, probs: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for &p in probs {
        if !(p >= 0.0) || !p.is_finite() {
            return param_err(name, format!("negative or non-finite probability {p}"));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        return param_err(name, format!("probabilities sum to {sum}, expected 1"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_is_valid() {
        let d = DistributionSpec::uniform(1, 1.0, 4, 3).unwrap();
        assert_eq!(d.num_cells(), 4);
        assert!((d.collision_prob() - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_sums_and_rho() {
        let bad = DistributionSpec::new(
            1,
            1.0,
            2,
            3,
            vec![0.6, 0.5],
            vec![vec![1.0, 0.0, 0.0]; 2],
            None,
        );
        assert!(bad.is_err());
        let bad_rho = DistributionSpec::new(
            1,
            1.0,
            2,
            3,
            vec![0.5, 0.5],
            vec![vec![1.0, 0.0, 0.0]; 2],
            Some(1.0),
        );
        assert!(bad_rho.is_err());
    }

    #[test]
    fn hash_is_content_sensitive() {
        let a = DistributionSpec::uniform(1, 1.0, 4, 3).unwrap();
        let b = DistributionSpec::uniform(1, 1.0, 4, 4).unwrap();
        assert_ne!(a.content_hash(), b.content_hash());
        assert_eq!(a.content_hash(), a.clone().content_hash());
    }

    #[test]
    fn relabeling_permutes_rows() {
        let d = DistributionSpec::new(
            1,
            1.0,
            1,
            3,
            vec![1.0],
            vec![vec![0.5, 0.3, 0.2]],
            None,
        )
        .unwrap();
        let r = d.relabeled(&[2, 0, 1]).unwrap();
        assert_eq!(r.label_probs(0), &[0.3, 0.2, 0.5]);
    }
}
