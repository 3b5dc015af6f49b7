//! Domain types and exact elementary computations: bounded-variation grid
//! functions, multi-class margin machinery, the truncated hinge loss,
//! empirical L_p metrics, data distributions and parameter bundles.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function, so concurrent evaluation needs no synchronization.

mod class;
mod dist;
mod estimate;
mod grid;
mod margin;
mod metric;
mod params;

pub use class::FiniteFunctionClass;
pub use dist::DistributionSpec;
pub use estimate::{CapacityEstimate, CapacityKind};
pub use grid::{
    cell_center, cell_index, face_jump_sum, random_bv, random_tuples, GridBVFunction,
    MultiClassTuple,
};
pub use margin::{margin, margin_of_scores, truncate, truncated_hinge_loss, truncated_margin};
pub use metric::empirical_distance;
pub use params::BoundParams;
