//! capbound: capacity measures, generalization bounds and sample-complexity
//! estimates for multi-class classifiers built from bounded-variation
//! component functions, plus a Monte Carlo harness that cross-validates the
//! closed-form bounds against observed deviation frequencies.
//!
//! The crate is organized around five modules:
//!
//! - [`core`]: grid-based BV functions, multi-class margins, the truncated
//!   hinge loss, empirical L_p metrics, distributions and parameter bundles.
//! - [`capacity`]: empirical estimation of covering/packing numbers, the
//!   fat-shattering dimension and Rademacher complexity on finite classes,
//!   exact at small sizes, with randomized lower-bound search beyond, and
//!   self-check suites for the capacity lemmas the calculators rely on.
//! - [`bounds`]: closed-form evaluators for every bound formula, class-count
//!   decomposition, deviation tail and sample-size estimate, with explicit
//!   placeholders for the unknown absolute constants.
//! - [`experiments`]: seeded i.i.d. and Markov data generation, exact and
//!   empirical margin risks, uniform-deviation frequency estimation and the
//!   alternating-block construction for dependent data.
//! - [`cli`]: one executable exposing all of the above as subcommands with
//!   JSON configs and reports plus CSV sweep emission.
//!
//! Runnable walkthroughs live in `examples/`; start with
//! `cargo run --example bound_formulas`.

pub mod bounds;
pub mod capacity;
pub mod cli;
pub mod core;
pub mod error;
pub mod experiments;
pub mod json;
pub mod rng;

pub use error::{Error, Result};
