//! Closed-form evaluators for every bound, decomposition and
//! sample-complexity formula in this crate, plus the auxiliary proof
//! inequalities as testable predicates.
//!
//! Conventions shared by all calculators:
//! - unknown absolute constants are explicit [`BoundParams`](crate::core::BoundParams)
//!   fields defaulting to 1.0 and echoed in reports;
//! - any log factor whose argument drops below 1 is clamped to 0 and the
//!   report is flagged `vacuous-regime` instead of going negative;
//! - values are plain f64 with no silent saturation; overflow to +infinity
//!   is reported via the `overflow` flag.

mod aux;
mod entropy;
mod fat_bounds;
mod handles;
mod report;
mod sample_size;
mod tail;

pub use aux::{aux_inequality, bartlett_log_inequality, ln_sqrt_inequality, AuxCheck, AuxKind};
pub use entropy::{
    alon_entropy, decompose_entropy, dutta_entropy, lp_entropy_bound, margin_entropy_bound,
    mv_entropy, DuttaVariant,
};
pub use fat_bounds::{bv_fat_bound, duan_fat_decomposition, fat_decomposition, rad_fat_bound};
pub use handles::{EntropyFn, FatFn, LogBase, MixingCoeff};
pub use report::{flag, BoundReport};
pub use sample_size::{
    effective_sample_complexity, sample_size, EffectiveComplexity, MixingKind, SampleSizeVariant,
};
pub use tail::{iid_deviation_bound, mixing_deviation_bound};
