//! Pairwise distance matrices over finite function classes.

use crate::core::{empirical_distance, FiniteFunctionClass};
use crate::error::{param_err, Error, Result};

/// A symmetric, nonnegative matrix of pairwise distances with zero diagonal.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Validate and wrap an explicit matrix. Symmetry is required exactly;
    /// matrices produced by `from_class*` are symmetric by construction.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return param_err("rows", "need at least one element");
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: n,
                });
            }
        }
        for i in 0..n {
            if rows[i][i] != 0.0 {
                return param_err("rows", format!("diagonal entry ({i},{i}) is {}", rows[i][i]));
            }
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::AsymmetricMatrix { row: i, col: j });
                }
                if !(rows[i][j] >= 0.0) {
                    return param_err("rows", format!("negative distance at ({i},{j})"));
                }
            }
        }
        let data = rows.into_iter().flatten().collect();
        Ok(DistanceMatrix { n, data })
    }

    /// Pairwise empirical d_p distances over all evaluation points.
    pub fn from_class(class: &FiniteFunctionClass, p: f64) -> Result<Self> {
        let cols: Vec<usize> = (0..class.num_points()).collect();
        Self::from_class_on(class, p, &cols)
    }

    /// Pairwise empirical d_p distances restricted to a column subset. An
    /// empty subset yields the all-zero matrix (every function collapses to
    /// the empty evaluation vector).
    pub fn from_class_on(class: &FiniteFunctionClass, p: f64, cols: &[usize]) -> Result<Self> {
        let n = class.len();
        for &c in cols {
            if c >= class.num_points() {
                return param_err("cols", format!("column {c} out of range"));
            }
        }
        let mut data = vec![0.0; n * n];
        if !cols.is_empty() {
            let select = |f: usize| -> Vec<f64> { cols.iter().map(|&c| class.value(f, c)).collect() };
            let selected: Vec<Vec<f64>> = (0..n).map(select).collect();
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = empirical_distance(p, &selected[i], &selected[j])?;
                    data[i * n + j] = d;
                    data[j * n + i] = d;
                }
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}
