//! Piecewise-constant functions on a regular grid over [0, A]^d.
//!
//! `GridBVFunction` is the concrete representative of the component classes
//! this crate studies: functions from [0, A]^d to [0, M] that are constant on
//! each of the G^d axis-aligned cells. For such a function the continuous
//! total variation is exactly the sum over interior faces of the absolute
//! value jump times the face measure (A/G)^(d-1), which makes the variation
//! budget V computable without quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Error, Result};
use crate::rng::derive_rng;
use rand::Rng;

/// A piecewise-constant grid function with values in [0, M].
///
/// Immutable after construction; the total variation is computed once and
/// cached. Cells are indexed row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct GridBVFunction {
    dim: usize,
    side: f64,
    resolution: usize,
    range_bound: f64,
    values: Vec<f64>,
    total_variation: f64,
}

/// Wire format: `{"d": .., "A": .., "G": .., "M": .., "values": [..]}` with a
/// flat row-major value array.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridRepr {
    d: usize,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "G")]
    g: usize,
    #[serde(rename = "M")]
    m: f64,
    values: Vec<f64>,
}

impl TryFrom<GridRepr> for GridBVFunction {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        GridBVFunction::new(r.d, r.a, r.g, r.m, r.values)
    }
}

impl From<GridBVFunction> for GridRepr {
    fn from(f: GridBVFunction) -> Self {
        GridRepr {
            d: f.dim,
            a: f.side,
            g: f.resolution,
            m: f.range_bound,
            values: f.values,
        }
    }
}

impl GridBVFunction {
    /// Build a grid function, validating the standing assumptions A >= 1,
    /// M >= 1 and that every value lies in [0, M].
    pub fn new(
        dim: usize,
        side: f64,
        resolution: usize,
        range_bound: f64,
        values: Vec<f64>,
    ) -> Result<Self> {
        if dim == 0 {
            return param_err("dim", "must be >= 1");
        }
        if !(side >= 1.0) || !side.is_finite() {
            return param_err("side", format!("A must be finite and >= 1, got {side}"));
        }
        if !(range_bound >= 1.0) || !range_bound.is_finite() {
            return param_err(
                "range_bound",
                format!("M must be finite and >= 1, got {range_bound}"),
            );
        }
        if resolution == 0 {
            return param_err("resolution", "must be >= 1");
        }
        let expected = (resolution as u128).checked_pow(dim as u32);
        match expected {
            Some(n) if n == values.len() as u128 => {}
            Some(n) => {
                return Err(Error::LengthMismatch {
                    left: values.len(),
                    right: n as usize,
                })
            }
            None => return param_err("resolution", "G^d overflows"),
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 || v > range_bound {
                return param_err(
                    "values",
                    format!("values[{i}] = {v} outside [0, {range_bound}]"),
                );
            }
        }
        let total_variation = face_jump_sum(dim, side, resolution, &values);
        Ok(GridBVFunction {
            dim,
            side,
            resolution,
            range_bound,
            values,
            total_variation,
        })
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

    pub fn range_bound(&self) -> f64 {
        self.range_bound
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    /// Cached total variation; matches `face_jump_sum` on `values` exactly.
    pub fn total_variation(&self) -> f64 {
        self.total_variation
    }

    /// Grid geometry as a comparable key (d, A, G, M).
    pub fn geometry(&self) -> (usize, f64, usize, f64) {
        (self.dim, self.side, self.resolution, self.range_bound)
    }

    /// Flat row-major cell index of a point, with floor indexing and the
    /// boundary x_k = A mapped into the last cell, so the function is total
    /// on the closed cube.
    pub fn cell_of(&self, x: &[f64]) -> Result<usize> {
        cell_index(self.dim, self.side, self.resolution, x)
    }

    /// Value on the cell containing `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        Ok(self.values[self.cell_of(x)?])
    }

    /// Value by flat cell index.
    pub fn value_at_cell(&self, cell: usize) -> f64 {
        self.values[cell]
    }

    /// Serialize to the wire format with floats written to 17 significant
    /// digits, so files round-trip bit-exactly.
    pub fn to_json_string(&self) -> Result<String> {
        crate::json::to_string_17(self)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Total variation of a piecewise-constant grid function: sum over interior
/// faces of |value jump| * (A/G)^(d-1). Zero iff the function is constant.
pub fn face_jump_sum(dim: usize, side: f64, resolution: usize, values: &[f64]) -> f64 {
    let face_measure = (side / resolution as f64).powi(dim as i32 - 1);
    let g = resolution;
    let mut strides = vec![1usize; dim];
    for k in (0..dim.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * g;
    }
    let mut sum = 0.0;
    for (idx, &v) in values.iter().enumerate() {
        for &stride in &strides {
            let coord = (idx / stride) % g;
            if coord + 1 < g {
                sum += (values[idx + stride] - v).abs();
            }
        }
    }
    sum * face_measure
}

/// Flat row-major cell index of `x` in the grid over [0, A]^d.
pub fn cell_index(dim: usize, side: f64, resolution: usize, x: &[f64]) -> Result<usize> {
    if x.len() != dim {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: dim,
        });
    }
    let mut idx = 0usize;
    for &c in x {
        if !(c >= 0.0 && c <= side) {
            return param_err("x", format!("coordinate {c} outside [0, {side}]"));
        }
        let i = ((c / side) * resolution as f64).floor() as usize;
        idx = idx * resolution + i.min(resolution - 1);
    }
    Ok(idx)
}

/// Center coordinates of a flat cell index.
pub fn cell_center(dim: usize, side: f64, resolution: usize, cell: usize) -> Vec<f64> {
    let mut coords = vec![0.0; dim];
    let mut rest = cell;
    let w = side / resolution as f64;
    for k in (0..dim).rev() {
        let i = rest % resolution;
        rest /= resolution;
        coords[k] = (i as f64 + 0.5) * w;
    }
    coords
}

/// Sample a grid function with total variation at most `v_target`.
///
/// Values are drawn i.i.d. uniform on [0, M]; if the resulting variation
/// exceeds the target, the function is shrunk toward its mean value by
/// lambda = v_target / TV (total variation is positively homogeneous under
/// f -> m + lambda (f - m)), clamped back into [0, M], and the variation is
/// re-verified. Clamping is a cellwise 1-Lipschitz retraction, so it can
/// only decrease the face-jump sum; the loop below retries with a slightly
/// smaller lambda should rounding land marginally above the target.
pub fn random_bv(
    dim: usize,
    side: f64,
    resolution: usize,
    range_bound: f64,
    v_target: f64,
    seed: u64,
) -> Result<GridBVFunction> {
    if !(v_target >= 0.0) {
        return param_err("v_target", format!("must be >= 0, got {v_target}"));
    }
    let cells = (resolution as u128)
        .checked_pow(dim as u32)
        .filter(|&n| n <= 1 << 24)
        .ok_or(Error::Parameter {
            name: "resolution",
            reason: "G^d too large".to_string(),
        })? as usize;
    let mut rng = derive_rng(seed, "random-bv", 0);
    let mut values: Vec<f64> = (0..cells)
        .map(|_| rng.random::<f64>() * range_bound)
        .collect();
    let mean = values.iter().sum::<f64>() / cells as f64;
    let mut tv = face_jump_sum(dim, side, resolution, &values);
    let mut lambda_extra = 1.0;
    while tv > v_target {
        let lambda = if tv > 0.0 { v_target / tv } else { 0.0 } * lambda_extra;
        for v in &mut values {
            *v = (mean + lambda * (*v - mean)).clamp(0.0, range_bound);
        }
        tv = face_jump_sum(dim, side, resolution, &values);
        lambda_extra = 1.0 - 1e-12;
    }
    GridBVFunction::new(dim, side, resolution, range_bound, values)
}

/// A tuple of C component functions sharing one grid geometry, C > 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TupleRepr", into = "TupleRepr")]
pub struct MultiClassTuple {
    components: Vec<GridBVFunction>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleRepr {
    components: Vec<GridBVFunction>,
}

impl TryFrom<TupleRepr> for MultiClassTuple {
    type Error = Error;
    fn try_from(r: TupleRepr) -> Result<Self> {
        MultiClassTuple::new(r.components)
    }
}

impl From<MultiClassTuple> for TupleRepr {
    fn from(t: MultiClassTuple) -> Self {
        TupleRepr {
            components: t.components,
        }
    }
}

impl MultiClassTuple {
    pub fn new(components: Vec<GridBVFunction>) -> Result<Self> {
        if components.len() <= 2 {
            return param_err(
                "components",
                format!("C must be > 2, got {}", components.len()),
            );
        }
        let geo = components[0].geometry();
        for (k, c) in components.iter().enumerate() {
            if c.geometry() != geo {
                return Err(Error::GeometryMismatch(format!(
                    "component {k} has geometry {:?}, expected {:?}",
                    c.geometry(),
                    geo
                )));
            }
        }
        Ok(MultiClassTuple { components })
    }

    pub fn num_classes(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[GridBVFunction] {
        &self.components
    }

    pub fn geometry(&self) -> (usize, f64, usize, f64) {
        self.components[0].geometry()
    }

    /// All component scores at a point.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        let cell = self.components[0].cell_of(x)?;
        Ok(self.scores_at_cell(cell))
    }

    pub fn scores_at_cell(&self, cell: usize) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.value_at_cell(cell))
            .collect()
    }

    /// Margin at a cell for a 1-based label, without re-deriving the cell
    /// from coordinates. Hot path of the risk estimators.
    pub fn margin_at_cell(&self, cell: usize, y: usize) -> Result<f64> {
        if y == 0 || y > self.components.len() {
            return Err(Error::LabelOutOfRange {
                label: y,
                num_classes: self.components.len(),
            });
        }
        let own = self.components[y - 1].value_at_cell(cell);
        let mut best_other = f64::NEG_INFINITY;
        for (k, c) in self.components.iter().enumerate() {
            if k != y - 1 {
                let v = c.value_at_cell(cell);
                if v > best_other {
                    best_other = v;
                }
            }
        }
        Ok(0.5 * (own - best_other))
    }

    /// Largest component total variation, a valid budget V for the tuple.
    pub fn max_total_variation(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.total_variation())
            .fold(0.0, f64::max)
    }
}

/// Sample `count` class tuples of C components each, every component drawn
/// by `random_bv` with the given variation budget. Deterministic in `seed`.
pub fn random_tuples(
    count: usize,
    num_classes: usize,
    dim: usize,
    side: f64,
    resolution: usize,
    range_bound: f64,
    v_target: f64,
    seed: u64,
) -> Result<Vec<MultiClassTuple>> {
    (0..count)
        .map(|i| {
            let components = (0..num_classes)
                .map(|k| {
                    random_bv(
                        dim,
                        side,
                        resolution,
                        range_bound,
                        v_target,
                        crate::rng::mix(seed, "tuple-component", (i * num_classes + k) as u64),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            MultiClassTuple::new(components)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle for the face-jump sum: enumerate coordinate tuples
    // directly and accumulate jumps axis by axis.
    fn tv_oracle(f: &GridBVFunction) -> f64 {
        let (d, a, g, _) = f.geometry();
        let face = (a / g as f64).powi(d as i32 - 1);
        let mut total = 0.0;
        let mut coords = vec![0usize; d];
        loop {
            let idx = coords.iter().fold(0, |acc, &c| acc * g + c);
            for axis in 0..d {
                if coords[axis] + 1 < g {
                    let mut up = coords.clone();
                    up[axis] += 1;
                    let idx_up = up.iter().fold(0, |acc, &c| acc * g + c);
                    total += (f.values()[idx_up] - f.values()[idx]).abs() * face;
                }
            }
            // odometer increment
            let mut axis = d;
            loop {
                if axis == 0 {
                    return total;
                }
                axis -= 1;
                coords[axis] += 1;
                if coords[axis] < g {
                    break;
                }
                coords[axis] = 0;
            }
        }
    }

    #[test]
    fn tv_1d_alternating() {
        let f = GridBVFunction::new(1, 1.0, 4, 1.0, vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(f.total_variation(), 3.0);
        assert_eq!(tv_oracle(&f), 3.0);
    }

    #[test]
    fn tv_constant_is_zero() {
        let f = GridBVFunction::new(2, 1.5, 3, 1.0, vec![0.25; 9]).unwrap();
        assert_eq!(f.total_variation(), 0.0);
    }

    #[test]
    fn tv_2d_step() {
        // Row-major [[0,1],[0,1]]: jump of 1 across the vertical interior
        // face in each row, face measure 0.5.
        let f = GridBVFunction::new(2, 1.0, 2, 1.0, vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(f.total_variation(), 1.0);
        assert_eq!(tv_oracle(&f), 1.0);
    }

    #[test]
    fn tv_cache_matches_recomputation() {
        for seed in 0..10 {
            let f = random_bv(2, 2.0, 4, 1.0, 5.0, seed).unwrap();
            let direct = face_jump_sum(2, 2.0, 4, f.values());
            assert_eq!(f.total_variation(), direct);
            assert!((f.total_variation() - tv_oracle(&f)).abs() < 1e-12);
        }
    }

    #[test]
    fn constructor_rejects_out_of_range_values() {
        assert!(GridBVFunction::new(1, 1.0, 2, 1.0, vec![0.0, 1.5]).is_err());
        assert!(GridBVFunction::new(1, 1.0, 2, 1.0, vec![-0.1, 0.5]).is_err());
        assert!(GridBVFunction::new(1, 0.5, 2, 1.0, vec![0.0, 0.5]).is_err());
        assert!(GridBVFunction::new(1, 1.0, 2, 0.9, vec![0.0, 0.5]).is_err());
        assert!(GridBVFunction::new(1, 1.0, 3, 1.0, vec![0.0, 0.5]).is_err());
    }

    #[test]
    fn evaluation_floor_indexing() {
        let f = GridBVFunction::new(1, 1.0, 4, 1.0, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(f.evaluate(&[0.0]).unwrap(), 0.1);
        assert_eq!(f.evaluate(&[0.26]).unwrap(), 0.2);
        // The boundary x = A falls into the last cell.
        assert_eq!(f.evaluate(&[1.0]).unwrap(), 0.4);
        assert!(f.evaluate(&[1.1]).is_err());
        assert!(f.evaluate(&[0.1, 0.2]).is_err());
    }

    #[test]
    fn cell_center_round_trips() {
        for cell in 0..16 {
            let x = cell_center(2, 2.0, 4, cell);
            assert_eq!(cell_index(2, 2.0, 4, &x).unwrap(), cell);
        }
    }

    #[test]
    fn random_bv_zero_target_is_constant() {
        let f = random_bv(1, 1.0, 8, 1.0, 0.0, 3).unwrap();
        assert_eq!(f.total_variation(), 0.0);
        let first = f.values()[0];
        assert!(f.values().iter().all(|&v| v == first));
    }

    #[test]
    fn random_bv_respects_budget_and_range() {
        let f = random_bv(1, 1.0, 8, 1.0, 2.0, 7).unwrap();
        assert!(tv_oracle(&f) <= 2.0);
        assert!(f.values().iter().all(|&v| (0.0..=1.0).contains(&v)));
        // Deterministic in the seed.
        let g = random_bv(1, 1.0, 8, 1.0, 2.0, 7).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn random_bv_shrinks_high_variation() {
        // With a tight budget the raw draw always exceeds it, forcing the
        // shrink path; the recomputed variation must still obey the budget.
        for seed in 0..20 {
            let f = random_bv(2, 1.0, 4, 1.0, 0.3, seed).unwrap();
            assert!(f.total_variation() <= 0.3, "seed {seed}");
        }
    }

    #[test]
    fn tuple_requires_shared_geometry_and_c_above_two() {
        let a = GridBVFunction::new(1, 1.0, 2, 1.0, vec![0.0, 1.0]).unwrap();
        let b = GridBVFunction::new(1, 1.0, 4, 1.0, vec![0.0; 4]).unwrap();
        assert!(MultiClassTuple::new(vec![a.clone(), a.clone()]).is_err());
        assert!(MultiClassTuple::new(vec![a.clone(), a.clone(), b]).is_err());
        assert!(MultiClassTuple::new(vec![a.clone(), a.clone(), a]).is_ok());
    }

    #[test]
    fn grid_json_round_trip() {
        let f = random_bv(2, 1.0, 3, 1.0, 2.0, 11).unwrap();
        let s = f.to_json_string().unwrap();
        assert!(s.starts_with("{\"d\":2,\"A\":"));
        let back = GridBVFunction::from_json_str(&s).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn grid_json_rejects_unknown_keys() {
        let s = r#"{"d":1,"A":1.0,"G":1,"M":1.0,"values":[0.5],"extra":1}"#;
        assert!(GridBVFunction::from_json_str(s).is_err());
    }
}
