//! Argument and config-file surface.
//!
//! Every subcommand accepts the same JSON config file shape as its flags,
//! with flags taking precedence; unknown config keys are rejected. The
//! fully-resolved configuration (defaults included) is echoed into every
//! report.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "capbound",
    version,
    about = "Capacity measures, generalization bounds and deviation experiments for multi-class BV classifiers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// JSON config file; explicit flags override file values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Base seed; every random stream is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the JSON report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write CSV data here (atomically).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Worker threads, 0 = auto. Falls back to CAPBOUND_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Echo the resolved config to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a closed-form bound formula, optionally sweeping one key.
    Bounds(BoundsArgs),
    /// Estimate a capacity measure of a finite class.
    Capacity(CapacityArgs),
    /// Monte Carlo uniform-deviation experiment on independent samples.
    Deviation(ExperimentArgs),
    /// The same experiment on Markov-dependent samples with blocking.
    Mixing(ExperimentArgs),
    /// Run a capacity-lemma verification suite.
    Lemmas(LemmasArgs),
    /// Sample-size and effective-sample-complexity estimates.
    SampleSize(SampleSizeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bounds(_) => "bounds",
            Command::Capacity(_) => "capacity",
            Command::Deviation(_) => "deviation",
            Command::Mixing(_) => "mixing",
            Command::Lemmas(_) => "lemmas",
            Command::SampleSize(_) => "sample-size",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    BvFat,
    Mv,
    Alon,
    Decompose,
    Musl,
    Duan,
    Thm3,
    Cor2,
    Dutta,
    Thm1,
    Thm4,
    Mixing,
    EffComplexity,
    RadFat,
    Aux,
}

impl Formula {
    pub fn token(self) -> &'static str {
        match self {
            Formula::BvFat => "bv-fat",
            Formula::Mv => "mv",
            Formula::Alon => "alon",
            Formula::Decompose => "decompose",
            Formula::Musl => "musl",
            Formula::Duan => "duan",
            Formula::Thm3 => "thm3",
            Formula::Cor2 => "cor2",
            Formula::Dutta => "dutta",
            Formula::Thm1 => "thm1",
            Formula::Thm4 => "thm4",
            Formula::Mixing => "mixing",
            Formula::EffComplexity => "eff-complexity",
            Formula::RadFat => "rad-fat",
            Formula::Aux => "aux",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyChoice {
    Zero,
    Cor2,
    Mv,
    Alon,
    Musl,
    Dutta,
}

fn parse_p(s: &str) -> std::result::Result<f64, String> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 1.0 {
        Ok(v)
    } else {
        Err(format!("p must be >= 1, got {v}"))
    }
}

/// Accept a JSON number or the string "inf" for the metric exponent.
mod p_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        let raw = Option::<Raw>::deserialize(d)?;
        match raw {
            None => Ok(None),
            Some(Raw::Number(v)) => Ok(Some(v)),
            Some(Raw::Text(s)) => super::parse_p(&s).map(Some).map_err(serde::de::Error::custom),
        }
    }

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) if x.is_infinite() => "inf".serialize(s),
            other => other.serialize(s),
        }
    }
}

/// Bound-formula parameters and selectors. One flat struct serves the CLI
/// flags and the config file; every field is optional here and resolved
/// against defaults at dispatch time.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub formula: Option<Formula>,
    /// Domain side length A.
    #[arg(long = "A")]
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Range bound M.
    #[arg(long = "M")]
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Total variation budget V.
    #[arg(long = "V")]
    #[serde(rename = "V", skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    /// Input dimension d.
    #[arg(long = "d")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Number of classes C.
    #[arg(long = "C")]
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Constant K of the BV fat-shattering bound.
    #[arg(long = "K")]
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    /// Density bound K_P.
    #[arg(long = "K-P")]
    #[serde(rename = "K_P", skip_serializing_if = "Option::is_none")]
    pub k_p: Option<f64>,
    #[arg(long = "K1")]
    #[serde(rename = "K1", skip_serializing_if = "Option::is_none")]
    pub k1: Option<f64>,
    #[arg(long = "K2")]
    #[serde(rename = "K2", skip_serializing_if = "Option::is_none")]
    pub k2: Option<f64>,
    #[arg(long = "K3")]
    #[serde(rename = "K3", skip_serializing_if = "Option::is_none")]
    pub k3: Option<f64>,
    #[arg(long = "K-F")]
    #[serde(rename = "K_F", skip_serializing_if = "Option::is_none")]
    pub k_f: Option<f64>,
    /// Sample size for n-dependent entropy formulas.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    /// Metric exponent p >= 1; "inf" for the sup metric.
    #[arg(long, value_parser = parse_p)]
    #[serde(with = "p_serde", skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Range bound M_G of the composite margin class (Duan decomposition);
    /// defaults to M/2, the margin-transform range.
    #[arg(long = "M-G")]
    #[serde(rename = "M_G", skip_serializing_if = "Option::is_none")]
    pub m_g: Option<f64>,
    /// Number of block pairs b_n (mixing formula).
    #[arg(long = "b-n")]
    #[serde(rename = "b_n", skip_serializing_if = "Option::is_none")]
    pub b_n: Option<u64>,
    /// Block length a_n (mixing formula).
    #[arg(long = "a-n")]
    #[serde(rename = "a_n", skip_serializing_if = "Option::is_none")]
    pub a_n: Option<u64>,
    /// Stay probability for the geometric mixing envelope beta(k) = rho^k.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta0: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Algebraic mixing exponent k.
    #[arg(long = "k-mix")]
    #[serde(rename = "k_mix", skip_serializing_if = "Option::is_none")]
    pub k_mix: Option<f64>,
    /// Exponential mixing exponent k'.
    #[arg(long = "k-prime")]
    #[serde(rename = "k_prime", skip_serializing_if = "Option::is_none")]
    pub k_prime: Option<f64>,
    /// Variant for thm4: alon | cor2.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    /// Kind selector: eff-complexity {algebraic, exponential},
    /// dutta {continuous, empirical}, aux {bartlett-log, ln-sqrt}.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Fat-dimension handle: "bv" or a numeric constant.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fat: Option<String>,
    /// Entropy handle for tail bounds and the decomposition.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<EntropyChoice>,
    /// Log base override for squared-log factors: "2" or "e".
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[arg(long = "aux-a")]
    #[serde(rename = "aux_a", skip_serializing_if = "Option::is_none")]
    pub aux_a: Option<f64>,
    #[arg(long = "aux-b")]
    #[serde(rename = "aux_b", skip_serializing_if = "Option::is_none")]
    pub aux_b: Option<f64>,
    #[arg(long = "aux-x")]
    #[serde(rename = "aux_x", skip_serializing_if = "Option::is_none")]
    pub aux_x: Option<f64>,
    #[arg(long = "aux-k")]
    #[serde(rename = "aux_k", skip_serializing_if = "Option::is_none")]
    pub aux_k: Option<f64>,
    #[arg(long = "aux-n")]
    #[serde(rename = "aux_n", skip_serializing_if = "Option::is_none")]
    pub aux_n: Option<f64>,
    /// Sweep one key: "key=start:stop:steps"; rows go to --csv (or stdout).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<String>,
    /// Accepted in config files; merged with the global seed flag.
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

macro_rules! take_first {
    ($merged:expr, $flags:expr, $file:expr, [$($field:ident),* $(,)?]) => {
        $( $merged.$field = $flags.$field.clone().or($file.$field.clone()); )*
    };
}

impl BoundsArgs {
    pub fn merged(flags: &Self, file: &Self) -> Self {
        let mut merged = Self::default();
        take_first!(
            merged,
            flags,
            file,
            [
                formula, a, m, v, d, c, gamma, epsilon, delta, k, k_p, k1, k2, k3, k_f, n, p,
                m_g, b_n, a_n, rho, beta0, beta, k_mix, k_prime, variant, kind, fat, entropy,
                base, aux_a, aux_b, aux_x, aux_k, aux_n, sweep, seed
            ]
        );
        merged
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Cover,
    Pack,
    Fat,
    Rademacher,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CapacityArgs {
    /// Path to a class spec JSON file ({"matrix": ...} or {"random_bv": ...}).
    /// Config files may inline the spec under the "class" key instead.
    #[arg(long = "class")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_path: Option<PathBuf>,
    #[arg(skip)]
    #[serde(rename = "class", skip_serializing_if = "Option::is_none")]
    pub class: Option<super::spec::ClassSpec>,
    /// Single scale.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Comma-separated scale list for a CSV sweep.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<Measure>,
    /// exact | greedy | randomized | mc (validated per measure).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Monte Carlo trials / randomized search budget.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// Metric exponent for covering/packing; "inf" for the sup metric.
    #[arg(long, value_parser = parse_p)]
    #[serde(with = "p_serde", skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CapacityArgs {
    pub fn merged(flags: &Self, file: &Self) -> Self {
        let mut merged = Self::default();
        take_first!(
            merged,
            flags,
            file,
            [class_path, class, epsilon, epsilons, measure, mode, trials, p, seed]
        );
        merged
    }
}

/// Shared argument surface of the deviation and mixing experiments; the
/// config shape is identical ({class_spec, dist_spec, n, epsilon, gamma,
/// trials, seed, rho?, a_n?}), the mixing subcommand requires rho and a_n.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentArgs {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_spec: Option<super::spec::ClassListSpec>,
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist_spec: Option<super::spec::DistSpec>,
    /// Path to a JSON file holding the class list spec.
    #[arg(long = "classes")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_path: Option<PathBuf>,
    /// Path to a JSON file holding the distribution spec.
    #[arg(long = "dist")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist_path: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// Stay probability of the Markov sampler (mixing only).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Block length (mixing only).
    #[arg(long = "a-n")]
    #[serde(rename = "a_n", skip_serializing_if = "Option::is_none")]
    pub a_n: Option<usize>,
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ExperimentArgs {
    pub fn merged(flags: &Self, file: &Self) -> Self {
        let mut merged = Self::default();
        take_first!(
            merged,
            flags,
            file,
            [class_spec, dist_spec, class_path, dist_path, n, epsilon, gamma, trials, rho, a_n, seed]
        );
        merged
    }
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmasArgs {
    /// lemma1 | lemmaB1 | finite_counting
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<u64>,
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl LemmasArgs {
    pub fn merged(flags: &Self, file: &Self) -> Self {
        let mut merged = Self::default();
        take_first!(merged, flags, file, [suite, cases, seed]);
        merged
    }
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleSizeArgs {
    /// alon | cor2 | mixing-algebraic | mixing-exponential
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[arg(long = "A")]
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[arg(long = "M")]
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[arg(long = "V")]
    #[serde(rename = "V", skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[arg(long = "d")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[arg(long = "C")]
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long = "K")]
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[arg(long = "K1")]
    #[serde(rename = "K1", skip_serializing_if = "Option::is_none")]
    pub k1: Option<f64>,
    #[arg(long = "K2")]
    #[serde(rename = "K2", skip_serializing_if = "Option::is_none")]
    pub k2: Option<f64>,
    #[arg(long = "K3")]
    #[serde(rename = "K3", skip_serializing_if = "Option::is_none")]
    pub k3: Option<f64>,
    /// Fat-dimension handle for the mixing variants: "bv" or a constant.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fat: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta0: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[arg(long = "k-mix")]
    #[serde(rename = "k_mix", skip_serializing_if = "Option::is_none")]
    pub k_mix: Option<f64>,
    #[arg(long = "k-prime")]
    #[serde(rename = "k_prime", skip_serializing_if = "Option::is_none")]
    pub k_prime: Option<f64>,
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SampleSizeArgs {
    pub fn merged(flags: &Self, file: &Self) -> Self {
        let mut merged = Self::default();
        take_first!(
            merged,
            flags,
            file,
            [variant, a, m, v, d, c, gamma, epsilon, delta, k, k1, k2, k3, fat, beta0, beta, k_mix, k_prime, seed]
        );
        merged
    }
}

/// Load and parse a config file for a subcommand.
pub fn load_config<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("malformed config {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[test]
    fn bounds_flags_parse() {
        let cli = Cli::parse_from([
            "capbound", "bounds", "--formula", "bv-fat", "--A", "1", "--V", "1", "--K", "1",
            "--d", "1", "--epsilon", "1",
        ]);
        match cli.command {
            Command::Bounds(args) => {
                assert_eq!(args.formula, Some(Formula::BvFat));
                assert_eq!(args.a, Some(1.0));
                assert_eq!(args.epsilon, Some(1.0));
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn global_flags_work_after_the_subcommand() {
        let cli = Cli::parse_from([
            "capbound", "lemmas", "--suite", "lemma1", "--cases", "100", "--seed", "3",
        ]);
        assert_eq!(cli.global.seed, Some(3));
        match cli.command {
            Command::Lemmas(args) => {
                assert_eq!(args.suite.as_deref(), Some("lemma1"));
                assert_eq!(args.cases, Some(100));
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn flags_override_file_values() {
        let file: BoundsArgs =
            serde_json::from_str(r#"{"formula": "mv", "epsilon": 0.5, "M": 2.0}"#).unwrap();
        let flags = BoundsArgs {
            epsilon: Some(0.25),
            ..BoundsArgs::default()
        };
        let merged = BoundsArgs::merged(&flags, &file);
        assert_eq!(merged.formula, Some(Formula::Mv));
        assert_eq!(merged.epsilon, Some(0.25));
        assert_eq!(merged.m, Some(2.0));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(serde_json::from_str::<BoundsArgs>(r#"{"unknown_key": 1}"#).is_err());
        assert!(serde_json::from_str::<LemmasArgs>(r#"{"suites": "x"}"#).is_err());
    }

    #[test]
    fn p_accepts_inf() {
        let args: CapacityArgs = serde_json::from_str(r#"{"p": "inf"}"#).unwrap();
        assert!(args.p.unwrap().is_infinite());
        let args: CapacityArgs = serde_json::from_str(r#"{"p": 2.0}"#).unwrap();
        assert_eq!(args.p, Some(2.0));
    }
}
