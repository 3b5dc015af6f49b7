//! JSON specifications for classes and distributions consumed by the
//! capacity, deviation and mixing subcommands.

use serde::{Deserialize, Serialize};

use crate::core::{
    random_bv, random_tuples, DistributionSpec, FiniteFunctionClass, MultiClassTuple,
};
use crate::error::Result;

/// A finite function class: either an explicit value matrix or a sampler of
/// bounded-variation grid functions evaluated on random points.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassSpec {
    Matrix {
        values: Vec<Vec<f64>>,
        range_bound: f64,
        #[serde(default)]
        provenance: String,
    },
    RandomBv {
        count: usize,
        d: usize,
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "G")]
        g: usize,
        #[serde(rename = "M")]
        m: f64,
        #[serde(rename = "V")]
        v: f64,
        /// Number of uniform random evaluation points.
        points: usize,
        /// Falls back to the run seed when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl ClassSpec {
    pub fn build(&self, run_seed: u64) -> Result<FiniteFunctionClass> {
        match self {
            ClassSpec::Matrix {
                values,
                range_bound,
                provenance,
            } => FiniteFunctionClass::new(values.clone(), *range_bound, provenance.clone()),
            ClassSpec::RandomBv {
                count,
                d,
                a,
                g,
                m,
                v,
                points,
                seed,
            } => {
                let seed = seed.unwrap_or(run_seed);
                let functions = (0..*count)
                    .map(|i| random_bv(*d, *a, *g, *m, *v, crate::rng::mix(seed, "class-fn", i as u64)))
                    .collect::<Result<Vec<_>>>()?;
                FiniteFunctionClass::from_grid_sample(
                    &functions,
                    *points,
                    seed,
                    format!("random_bv count={count} d={d} G={g} V={v} seed={seed}"),
                )
            }
        }
    }
}

/// A list of multi-class tuples: sampled or explicit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassListSpec {
    RandomTuples {
        count: usize,
        #[serde(rename = "C")]
        c: usize,
        d: usize,
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "G")]
        g: usize,
        #[serde(rename = "M")]
        m: f64,
        #[serde(rename = "V")]
        v: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Explicit(Vec<MultiClassTuple>),
}

impl ClassListSpec {
    pub fn build(&self, run_seed: u64) -> Result<Vec<MultiClassTuple>> {
        match self {
            ClassListSpec::RandomTuples {
                count,
                c,
                d,
                a,
                g,
                m,
                v,
                seed,
            } => random_tuples(*count, *c, *d, *a, *g, *m, *v, seed.unwrap_or(run_seed)),
            ClassListSpec::Explicit(tuples) => Ok(tuples.clone()),
        }
    }
}

/// A data distribution: uniform over cells and labels, or fully explicit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DistSpec {
    Uniform {
        d: usize,
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "G")]
        g: usize,
        #[serde(rename = "C")]
        c: usize,
    },
    Explicit(DistributionSpec),
}

impl DistSpec {
    pub fn build(&self) -> Result<DistributionSpec> {
        match self {
            DistSpec::Uniform { d, a, g, c } => DistributionSpec::uniform(*d, *a, *g, *c),
            DistSpec::Explicit(spec) => Ok(spec.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_spec_builds_a_class() {
        let json = r#"{"matrix": {"values": [[0.1, -0.2]], "range_bound": 1.0}}"#;
        let spec: ClassSpec = serde_json::from_str(json).unwrap();
        let class = spec.build(0).unwrap();
        assert_eq!(class.len(), 1);
        assert_eq!(class.num_points(), 2);
    }

    #[test]
    fn random_bv_spec_is_deterministic_in_the_run_seed() {
        let json = r#"{"random_bv": {"count": 3, "d": 1, "A": 1.0, "G": 8, "M": 1.0, "V": 2.0, "points": 5}}"#;
        let spec: ClassSpec = serde_json::from_str(json).unwrap();
        let a = spec.build(7).unwrap();
        let b = spec.build(7).unwrap();
        assert_eq!(a, b);
        let c = spec.build(8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let json = r#"{"matrix": {"values": [[0.1]], "range_bound": 1.0, "oops": 3}}"#;
        assert!(serde_json::from_str::<ClassSpec>(json).is_err());
    }

    #[test]
    fn uniform_dist_spec_builds() {
        let json = r#"{"uniform": {"d": 1, "A": 1.0, "G": 4, "C": 3}}"#;
        let spec: DistSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.build().unwrap().num_cells(), 4);
    }
}
