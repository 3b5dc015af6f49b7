//! Empirical estimation of the four capacity measures on finite classes:
//! covering and packing numbers, the fat-shattering dimension and the
//! Rademacher complexity. Exact brute-force search at small sizes,
//! randomized lower-bound search beyond, plus the lemma self-check suites.

mod fat;
mod lemmas;
mod matrix;
mod packing;
mod rademacher;
mod witness;

pub use fat::{
    exact_fat_with_subset, fat_shattering_dimension, FatMode, FAT_EXACT_FUNCTIONS_CAP,
    FAT_EXACT_POOL_CAP,
};
pub use lemmas::{lemma_checks, LemmaReport, LemmaSuite};
pub use matrix::DistanceMatrix;
pub use packing::{exact_covering, greedy_packing, EXACT_COVER_CAP};
pub use rademacher::{
    exact_rademacher_on, rademacher_complexity, RademacherMode, RADEMACHER_EXACT_CAP,
};
pub use witness::{fat_shattering_check, witness_shatters, ShatterCheck, WitnessGrid, FAT_CHECK_CAP};
