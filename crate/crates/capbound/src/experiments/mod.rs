//! Monte Carlo validation harness: seeded data generation (independent and
//! Markov), exact and empirical margin risks, uniform-deviation frequency
//! estimation and the alternating-block construction for dependent data.

mod blocking;
mod deviation;
mod mixing;
mod risk;
mod sample;

pub use blocking::{blocking, Block, BlockPartition};
pub use deviation::{deviation_experiment, DeviationReport};
pub use mixing::{mixing_deviation_experiment, MixingReport};
pub use risk::{empirical_risk, exact_risk};
pub use sample::{sample_iid, sample_markov, LabeledSample, SampleMeta};
