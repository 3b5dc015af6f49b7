//! Command-line surface: subcommands {bounds, capacity, deviation, mixing,
//! lemmas, sample-size} over the library, with JSON configs (flags override
//! file values), deterministic seeded runs, machine-readable JSON reports
//! validated against the shipped schema, and CSV sweep emission.
//!
//! Formula tokens on this surface map to library functions as follows:
//! `thm1` -> [`bounds::iid_deviation_bound`](crate::bounds::iid_deviation_bound),
//! `mixing` -> [`bounds::mixing_deviation_bound`](crate::bounds::mixing_deviation_bound),
//! `thm3` -> [`bounds::fat_decomposition`](crate::bounds::fat_decomposition),
//! `cor2` -> [`bounds::margin_entropy_bound`](crate::bounds::margin_entropy_bound),
//! `musl` -> [`bounds::lp_entropy_bound`](crate::bounds::lp_entropy_bound),
//! `thm4` -> [`bounds::sample_size`](crate::bounds::sample_size); the
//! remaining tokens match their function names directly.
//!
//! Exit codes: 0 success, 2 for parameter/precondition/config violations,
//! 1 for internal errors. Reports are byte-identical across reruns with the
//! same config and seed; wall time goes to stderr only.

mod args;
mod exec;
pub mod outputs;
pub mod schema;
pub mod spec;

pub use args::{
    BoundsArgs, CapacityArgs, Cli, Command, EntropyChoice, ExperimentArgs, Formula, GlobalArgs,
    LemmasArgs, Measure, SampleSizeArgs,
};
pub use exec::{execute, RunConfig};

use clap::Parser;

/// Parse arguments, set up the worker pool, dispatch, and map the outcome
/// to an exit code. `argv[0]` is expected as the first item.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version to stdout (exit 0) and usage errors
            // to stderr (exit 2).
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let started = std::time::Instant::now();
    let threads = cli.global.threads.unwrap_or_else(|| {
        std::env::var("CAPBOUND_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    });
    let outcome = if threads > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(cli)),
            Err(e) => Err(crate::error::Error::Config(format!(
                "cannot build a {threads}-thread pool: {e}"
            ))),
        }
    } else {
        execute(cli)
    };
    // Wall time stays on stderr so report files are byte-stable.
    eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
