//! Finite function classes given by explicit value matrices.
//!
//! Every empirical capacity estimator in this crate consumes a
//! `FiniteFunctionClass`: a list of |F| functions known only through their
//! values on n sample points, together with a range bound M_F.

use serde::{Deserialize, Serialize};

use crate::core::GridBVFunction;
use crate::error::{param_err, Error, Result};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ClassRepr", into = "ClassRepr")]
pub struct FiniteFunctionClass {
    values: Vec<Vec<f64>>,
    range_bound: f64,
    provenance: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassRepr {
    values: Vec<Vec<f64>>,
    range_bound: f64,
    #[serde(default)]
    provenance: String,
}

impl TryFrom<ClassRepr> for FiniteFunctionClass {
    type Error = Error;
    fn try_from(r: ClassRepr) -> Result<Self> {
        FiniteFunctionClass::new(r.values, r.range_bound, r.provenance)
    }
}

impl From<FiniteFunctionClass> for ClassRepr {
    fn from(c: FiniteFunctionClass) -> Self {
        ClassRepr {
            values: c.values,
            range_bound: c.range_bound,
            provenance: c.provenance,
        }
    }
}

impl FiniteFunctionClass {
    /// Build a class from a |F| x n value matrix. All entries must lie in
    /// [-M_F, M_F]; `provenance` records how the class was obtained.
    pub fn new(
        values: Vec<Vec<f64>>,
        range_bound: f64,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if values.is_empty() {
            return param_err("values", "need at least one function");
        }
        let n = values[0].len();
        if n == 0 {
            return param_err("values", "need at least one evaluation point");
        }
        if !(range_bound > 0.0) || !range_bound.is_finite() {
            return param_err("range_bound", format!("must be positive, got {range_bound}"));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v.abs() > range_bound {
                    return param_err(
                        "values",
                        format!("values[{i}][{j}] = {v} outside [-{range_bound}, {range_bound}]"),
                    );
                }
            }
        }
        Ok(FiniteFunctionClass {
            values,
            range_bound,
            provenance: provenance.into(),
        })
    }

    /// Evaluate grid functions on a set of points.
    pub fn from_grid_functions(
        functions: &[GridBVFunction],
        points: &[Vec<f64>],
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if functions.is_empty() {
            return param_err("functions", "need at least one function");
        }
        let m = functions
            .iter()
            .map(GridBVFunction::range_bound)
            .fold(0.0, f64::max);
        let values = functions
            .iter()
            .map(|f| points.iter().map(|x| f.evaluate(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiniteFunctionClass::new(values, m, provenance)
    }

    /// Evaluate grid functions on `count` uniform random points in the cube.
    pub fn from_grid_sample(
        functions: &[GridBVFunction],
        count: usize,
        seed: u64,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if functions.is_empty() {
            return param_err("functions", "need at least one function");
        }
        let (dim, side, _, _) = functions[0].geometry();
        let mut rng = crate::rng::derive_rng(seed, "class-points", 0);
        let points: Vec<Vec<f64>> = (0..count.max(1))
            .map(|_| (0..dim).map(|_| rng.random::<f64>() * side).collect())
            .collect();
        Self::from_grid_functions(functions, &points, provenance)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_points(&self) -> usize {
        self.values[0].len()
    }

    pub fn range_bound(&self) -> f64 {
        self.range_bound
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn value(&self, function: usize, point: usize) -> f64 {
        self.values[function][point]
    }

    pub fn row(&self, function: usize) -> &[f64] {
        &self.values[function]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// The class {f : f in F} united with {-f : f in F}.
    pub fn union_with_negation(&self) -> FiniteFunctionClass {
        let mut values = self.values.clone();
        values.extend(
            self.values
                .iter()
                .map(|row| row.iter().map(|v| -v).collect::<Vec<_>>()),
        );
        FiniteFunctionClass {
            values,
            range_bound: self.range_bound,
            provenance: format!("{} + negations", self.provenance),
        }
    }
}
