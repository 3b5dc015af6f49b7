//! Subcommand resolution and dispatch.

use std::path::PathBuf;

use serde_json::json;

use crate::bounds::{
    alon_entropy, aux_inequality, bv_fat_bound, decompose_entropy, duan_fat_decomposition,
    dutta_entropy, effective_sample_complexity, fat_decomposition, iid_deviation_bound,
    lp_entropy_bound, margin_entropy_bound, mixing_deviation_bound, mv_entropy, rad_fat_bound,
    sample_size, AuxKind, BoundReport, DuttaVariant, EntropyFn, FatFn, LogBase, MixingCoeff,
    MixingKind, SampleSizeVariant,
};
use crate::capacity::{
    exact_covering, fat_shattering_dimension, greedy_packing, lemma_checks,
    rademacher_complexity, DistanceMatrix, FatMode, LemmaSuite, RademacherMode,
};
use crate::cli::args::{
    load_config, BoundsArgs, CapacityArgs, Cli, Command, EntropyChoice, ExperimentArgs, Formula,
    LemmasArgs, Measure, SampleSizeArgs,
};
use crate::cli::outputs::{emit_report, emit_sweep, CsvCell};
use crate::cli::spec::{ClassListSpec, ClassSpec, DistSpec};
use crate::core::{BoundParams, CapacityEstimate, CapacityKind};
use crate::error::{Error, Result};
use crate::experiments::{deviation_experiment, mixing_deviation_experiment};

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

/// Resolved global run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub threads: usize,
    pub verbose: bool,
}

impl RunConfig {
    fn echo(&self) -> serde_json::Value {
        json!({
            "seed": self.seed,
            "out": self.out.as_ref().map(|p| p.display().to_string()),
            "csv": self.csv.as_ref().map(|p| p.display().to_string()),
            "threads": self.threads,
            "verbose": self.verbose,
        })
    }
}

fn merge_json(base: serde_json::Value, extra: serde_json::Value) -> serde_json::Value {
    let mut map = base.as_object().cloned().unwrap_or_default();
    if let Some(more) = extra.as_object() {
        for (k, v) in more {
            map.insert(k.clone(), v.clone());
        }
    }
    serde_json::Value::Object(map)
}

/// Execute a parsed invocation end to end: merge config, run, emit outputs.
pub fn execute(cli: Cli) -> Result<()> {
    let threads = match cli.global.threads {
        Some(t) => t,
        None => std::env::var("CAPBOUND_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0),
    };
    let make_run = |file_seed: Option<u64>| RunConfig {
        seed: cli.global.seed.or(file_seed).unwrap_or(0),
        out: cli.global.out.clone(),
        csv: cli.global.csv.clone(),
        threads,
        verbose: cli.global.verbose,
    };
    let subcommand = cli.command.name();
    match &cli.command {
        Command::Bounds(flags) => {
            let file: BoundsArgs = match &cli.global.config {
                Some(p) => load_config(p)?,
                None => BoundsArgs::default(),
            };
            let merged = BoundsArgs::merged(flags, &file);
            let run = make_run(merged.seed);
            let resolved = ResolvedBounds::from_args(&merged)?;
            let config = merge_json(resolved.echo(), run.echo());
            let (results, rows) = run_bounds(&resolved)?;
            let report = envelope(subcommand, config, results);
            match rows {
                Some((key, rows)) => {
                    finish(&run, &report, Some((&[key.as_str(), "value", "flags"], &rows)))
                }
                None => finish(&run, &report, None),
            }
        }
        Command::Capacity(flags) => {
            let file: CapacityArgs = match &cli.global.config {
                Some(p) => load_config(p)?,
                None => CapacityArgs::default(),
            };
            let merged = CapacityArgs::merged(flags, &file);
            let run = make_run(merged.seed);
            let (results, rows, config_echo) = run_capacity(&merged, run.seed)?;
            let config = merge_json(config_echo, run.echo());
            let report = envelope(subcommand, config, results);
            finish(
                &run,
                &report,
                Some((&["epsilon", "lower", "upper", "method", "seed"], &rows)),
            )
        }
        Command::Deviation(flags) | Command::Mixing(flags) => {
            let is_mixing = subcommand == "mixing";
            let file: ExperimentArgs = match &cli.global.config {
                Some(p) => load_config(p)?,
                None => ExperimentArgs::default(),
            };
            let merged = ExperimentArgs::merged(flags, &file);
            let run = make_run(merged.seed);
            let (results, rows, config_echo) = run_experiment(&merged, run.seed, is_mixing)?;
            let config = merge_json(config_echo, run.echo());
            let report = envelope(subcommand, config, results);
            finish(
                &run,
                &report,
                Some((&["trial", "sup_dev", "exceeded"], &rows)),
            )
        }
        Command::Lemmas(flags) => {
            let file: LemmasArgs = match &cli.global.config {
                Some(p) => load_config(p)?,
                None => LemmasArgs::default(),
            };
            let merged = LemmasArgs::merged(flags, &file);
            let run = make_run(merged.seed);
            let suite_token = merged.suite.as_deref().unwrap_or("lemma1");
            let suite = LemmaSuite::from_cli_token(suite_token).ok_or_else(|| {
                Error::Config(format!(
                    "unknown suite `{suite_token}` (expected lemma1 | lemmaB1 | finite_counting)"
                ))
            })?;
            let cases = merged.cases.unwrap_or(100);
            let lemma_report = lemma_checks(suite, run.seed, cases)?;
            let config = merge_json(
                json!({"suite": suite.cli_token(), "cases": cases}),
                run.echo(),
            );
            let report = envelope(subcommand, config, serde_json::to_value(&lemma_report)?);
            finish(&run, &report, None)
        }
        Command::SampleSize(flags) => {
            let file: SampleSizeArgs = match &cli.global.config {
                Some(p) => load_config(p)?,
                None => SampleSizeArgs::default(),
            };
            let merged = SampleSizeArgs::merged(flags, &file);
            let run = make_run(merged.seed);
            let (results, config_echo) = run_sample_size(&merged)?;
            let config = merge_json(config_echo, run.echo());
            let report = envelope(subcommand, config, results);
            finish(&run, &report, None)
        }
    }
}

fn envelope(
    subcommand: &str,
    config: serde_json::Value,
    results: serde_json::Value,
) -> serde_json::Value {
    json!({
        "schema_version": "1",
        "subcommand": subcommand,
        "config": config,
        "results": results,
    })
}

fn finish(
    run: &RunConfig,
    report: &serde_json::Value,
    csv: Option<(&[&str], &Vec<Vec<CsvCell>>)>,
) -> Result<()> {
    crate::cli::schema::validate_report(report)?;
    if run.verbose {
        eprintln!("config: {}", report["config"]);
    }
    if let Some((header, rows)) = csv {
        if let Some(path) = &run.csv {
            emit_sweep(Some(path), header, rows)?;
        }
    }
    emit_report(run.out.as_deref(), report)
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub key: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    fn parse(text: &str) -> Result<Self> {
        let (key, range) = text
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("sweep `{text}`: expected key=start:stop:steps")))?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return config_err(format!("sweep `{text}`: expected key=start:stop:steps"));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|e| Error::Config(format!("sweep start: {e}")))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|e| Error::Config(format!("sweep stop: {e}")))?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|e| Error::Config(format!("sweep steps: {e}")))?;
        if steps == 0 {
            return config_err("sweep needs at least one step");
        }
        Ok(SweepSpec {
            key: key.to_string(),
            start,
            stop,
            steps,
        })
    }

    fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        (0..self.steps)
            .map(|i| {
                self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct ResolvedBounds {
    formula: Formula,
    params: BoundParams,
    n: u64,
    p: f64,
    m_g: f64,
    b_n: Option<u64>,
    a_n: Option<u64>,
    rho: Option<f64>,
    beta0: f64,
    beta: f64,
    k_mix: f64,
    k_prime: f64,
    variant: SampleSizeVariant,
    kind: Option<String>,
    fat: String,
    entropy: EntropyChoice,
    base: Option<LogBase>,
    aux_a: f64,
    aux_b: f64,
    aux_x: f64,
    aux_k: f64,
    aux_n: f64,
    sweep: Option<SweepSpec>,
}

fn parse_base(s: &str) -> Result<LogBase> {
    match s {
        "2" => Ok(LogBase::Two),
        "e" => Ok(LogBase::E),
        other => config_err(format!("unknown log base `{other}` (expected 2 | e)")),
    }
}

fn parse_variant(s: &str) -> Result<SampleSizeVariant> {
    match s {
        "alon" => Ok(SampleSizeVariant::Alon),
        "cor2" => Ok(SampleSizeVariant::Cor2),
        other => config_err(format!("unknown variant `{other}` (expected alon | cor2)")),
    }
}

impl ResolvedBounds {
    fn from_args(args: &BoundsArgs) -> Result<Self> {
        let formula = args
            .formula
            .ok_or_else(|| Error::Config("missing --formula".to_string()))?;
        let mut params = BoundParams::default();
        apply_params(&mut params, args);
        let entropy = args.entropy.unwrap_or(match formula {
            Formula::Decompose => EntropyChoice::Dutta,
            _ => EntropyChoice::Cor2,
        });
        Ok(ResolvedBounds {
            formula,
            m_g: args.m_g.unwrap_or(params.m / 2.0),
            params,
            n: args.n.unwrap_or(1),
            p: args.p.unwrap_or(1.0),
            b_n: args.b_n,
            a_n: args.a_n,
            rho: args.rho,
            beta0: args.beta0.unwrap_or(1.0),
            beta: args.beta.unwrap_or(1.0),
            k_mix: args.k_mix.unwrap_or(1.0),
            k_prime: args.k_prime.unwrap_or(1.0),
            variant: parse_variant(args.variant.as_deref().unwrap_or("alon"))?,
            kind: args.kind.clone(),
            fat: args.fat.clone().unwrap_or_else(|| "bv".to_string()),
            entropy,
            base: args.base.as_deref().map(parse_base).transpose()?,
            aux_a: args.aux_a.unwrap_or(1.0),
            aux_b: args.aux_b.unwrap_or(1.0),
            aux_x: args.aux_x.unwrap_or(1.0),
            aux_k: args.aux_k.unwrap_or(1.0),
            aux_n: args.aux_n.unwrap_or(1.0),
            sweep: args.sweep.as_deref().map(SweepSpec::parse).transpose()?,
        })
    }

    fn echo(&self) -> serde_json::Value {
        json!({
            "formula": self.formula.token(),
            "params": self.params,
            "n": self.n,
            "p": if self.p.is_infinite() { json!("inf") } else { json!(self.p) },
            "M_G": self.m_g,
            "b_n": self.b_n,
            "a_n": self.a_n,
            "rho": self.rho,
            "beta0": self.beta0,
            "beta": self.beta,
            "k_mix": self.k_mix,
            "k_prime": self.k_prime,
            "variant": self.variant.cli_token(),
            "kind": self.kind,
            "fat": self.fat,
            "entropy": self.entropy,
            "base": self.base.map(|b| match b {
                LogBase::Two => "2",
                LogBase::E => "e",
            }),
            "aux": {"a": self.aux_a, "b": self.aux_b, "x": self.aux_x, "k": self.aux_k, "n": self.aux_n},
            "sweep": self.sweep.as_ref().map(|s| format!("{}={}:{}:{}", s.key, s.start, s.stop, s.steps)),
        })
    }

    fn fat_fn(&self) -> Result<FatFn> {
        if self.fat == "bv" {
            return FatFn::bv(&self.params);
        }
        match self.fat.parse::<f64>() {
            Ok(v) if v >= 0.0 => Ok(FatFn::constant(v)),
            _ => config_err(format!(
                "--fat must be \"bv\" or a nonnegative number, got `{}`",
                self.fat
            )),
        }
    }

    fn entropy_fn(&self) -> Result<EntropyFn> {
        let fat = self.fat_fn()?;
        let params = self.params.clone();
        let gamma = self.params.gamma;
        let base = self.base.unwrap_or(LogBase::E);
        Ok(match self.entropy {
            EntropyChoice::Zero => EntropyFn::zero(),
            EntropyChoice::Cor2 => EntropyFn::new(move |s, _| {
                margin_entropy_bound(params.c, s, gamma, params.m, &fat, base)
                    .map(|r| r.value)
                    .unwrap_or(f64::INFINITY)
            }),
            EntropyChoice::Mv => EntropyFn::new(move |s, _| {
                mv_entropy(params.m, s, &fat)
                    .map(|r| r.value)
                    .unwrap_or(f64::INFINITY)
            }),
            EntropyChoice::Alon => EntropyFn::new(move |s, nn| {
                alon_entropy(params.m, nn.max(1), s, &fat)
                    .map(|r| r.value)
                    .unwrap_or(f64::INFINITY)
            }),
            EntropyChoice::Musl => EntropyFn::new(move |s, nn| {
                lp_entropy_bound(&params, s, nn.max(1))
                    .map(|r| r.value)
                    .unwrap_or(f64::INFINITY)
            }),
            EntropyChoice::Dutta => EntropyFn::new(move |s, _| {
                dutta_entropy(&params, s, DuttaVariant::Empirical).unwrap_or(f64::INFINITY)
            }),
        })
    }

    fn mixing_coeff(&self) -> Result<MixingCoeff> {
        if let Some(rho) = self.rho {
            return MixingCoeff::geometric(rho);
        }
        match self.kind.as_deref() {
            Some("algebraic") => MixingCoeff::algebraic(self.beta0, self.k_mix),
            Some("exponential") => MixingCoeff::exponential(self.beta0, self.beta, self.k_prime),
            None => Ok(MixingCoeff::zero()),
            Some(other) => config_err(format!("unknown mixing kind `{other}`")),
        }
    }

    fn evaluate(&self) -> Result<BoundReport> {
        let eps = self.params.epsilon;
        match self.formula {
            Formula::BvFat => Ok(BoundReport::new(
                "bv-fat",
                bv_fat_bound(&self.params, eps)?,
            )),
            Formula::Mv => mv_entropy(self.params.m, eps, &self.fat_fn()?),
            Formula::Alon => alon_entropy(self.params.m, self.n, eps, &self.fat_fn()?),
            Formula::Decompose => {
                let value =
                    decompose_entropy(self.params.c, self.p, eps, &self.entropy_fn()?, self.n)?;
                Ok(BoundReport::new("decompose", value))
            }
            Formula::Musl => lp_entropy_bound(&self.params, eps, self.n),
            Formula::Duan => {
                duan_fat_decomposition(self.params.c, eps, self.m_g, &self.fat_fn()?)
            }
            Formula::Thm3 => fat_decomposition(
                self.params.c,
                eps,
                self.params.m,
                &self.fat_fn()?,
                self.base.unwrap_or(LogBase::Two),
            ),
            Formula::Cor2 => margin_entropy_bound(
                self.params.c,
                eps,
                self.params.gamma,
                self.params.m,
                &self.fat_fn()?,
                self.base.unwrap_or(LogBase::E),
            ),
            Formula::Dutta => {
                let variant = match self.kind.as_deref() {
                    None | Some("continuous") => DuttaVariant::Continuous,
                    Some("empirical") => DuttaVariant::Empirical,
                    Some(other) => {
                        return config_err(format!(
                            "unknown dutta kind `{other}` (expected continuous | empirical)"
                        ))
                    }
                };
                let value = dutta_entropy(&self.params, eps, variant)?;
                Ok(BoundReport::new("dutta", value))
            }
            Formula::Thm1 => {
                iid_deviation_bound(self.n, eps, self.params.gamma, &self.entropy_fn()?)
            }
            Formula::Thm4 => sample_size(self.variant, &self.params),
            Formula::Mixing => {
                let (b_n, a_n) = match (self.b_n, self.a_n) {
                    (Some(b), Some(a)) => (b, a),
                    _ => return config_err("mixing requires --b-n and --a-n"),
                };
                mixing_deviation_bound(
                    b_n,
                    a_n,
                    eps,
                    self.params.gamma,
                    &self.mixing_coeff()?,
                    &self.entropy_fn()?,
                )
            }
            Formula::EffComplexity => {
                let kind = match self.kind.as_deref() {
                    None | Some("exponential") => MixingKind::Exponential {
                        beta0: self.beta0,
                        beta: self.beta,
                        k_prime: self.k_prime,
                    },
                    Some("algebraic") => MixingKind::Algebraic {
                        beta0: self.beta0,
                        k: self.k_mix,
                    },
                    Some(other) => {
                        return config_err(format!(
                            "unknown eff-complexity kind `{other}` (expected algebraic | exponential)"
                        ))
                    }
                };
                let ec = effective_sample_complexity(kind, &self.params, &self.fat_fn()?)?;
                let mut report = BoundReport::new("eff-complexity", ec.b_n)
                    .with_diagnostic("a_n", ec.a_n)
                    .with_diagnostic("b_n", ec.b_n);
                for (k, v) in &ec.diagnostics {
                    report = report.with_diagnostic(k, *v);
                }
                for f in &ec.flags {
                    report = report.with_flag(f);
                }
                Ok(report)
            }
            Formula::RadFat => Ok(BoundReport::new(
                "rad-fat",
                rad_fat_bound(self.params.c, self.params.k_f, eps)?,
            )),
            Formula::Aux => {
                let kind = match self.kind.as_deref() {
                    None | Some("bartlett-log") => AuxKind::BartlettLog {
                        a: self.aux_a,
                        b: self.aux_b,
                        x: self.aux_x,
                    },
                    Some("ln-sqrt") => AuxKind::LnSqrt {
                        k: self.aux_k,
                        n: self.aux_n,
                    },
                    Some(other) => {
                        return config_err(format!(
                            "unknown aux kind `{other}` (expected bartlett-log | ln-sqrt)"
                        ))
                    }
                };
                let check = aux_inequality(kind)?;
                Ok(
                    BoundReport::new("aux", if check.holds { 1.0 } else { 0.0 })
                        .with_diagnostic("lhs", check.lhs)
                        .with_diagnostic("rhs", check.rhs),
                )
            }
        }
    }

    /// Set a sweepable key. Integer keys require integral sweep values.
    fn set_key(&mut self, key: &str, value: f64) -> Result<()> {
        let as_usize = |v: f64| -> Result<usize> {
            if v.fract() != 0.0 || v < 0.0 {
                return config_err(format!("sweep key `{key}` needs integral values, got {v}"));
            }
            Ok(v as usize)
        };
        match key {
            "epsilon" => self.params.epsilon = value,
            "gamma" => self.params.gamma = value,
            "delta" => self.params.delta = value,
            "A" => self.params.a = value,
            "M" => self.params.m = value,
            "V" => self.params.v = value,
            "K" => self.params.k = value,
            "K_P" => self.params.k_p = value,
            "K1" => self.params.k1 = value,
            "K2" => self.params.k2 = value,
            "K3" => self.params.k3 = value,
            "K_F" => self.params.k_f = value,
            "M_G" => self.m_g = value,
            "rho" => self.rho = Some(value),
            "beta0" => self.beta0 = value,
            "beta" => self.beta = value,
            "k_mix" => self.k_mix = value,
            "k_prime" => self.k_prime = value,
            "p" => self.p = value,
            "aux_a" => self.aux_a = value,
            "aux_b" => self.aux_b = value,
            "aux_x" => self.aux_x = value,
            "aux_k" => self.aux_k = value,
            "aux_n" => self.aux_n = value,
            "C" => self.params.c = as_usize(value)?,
            "d" => self.params.d = as_usize(value)?,
            "n" => self.n = as_usize(value)? as u64,
            "a_n" => self.a_n = Some(as_usize(value)? as u64),
            "b_n" => self.b_n = Some(as_usize(value)? as u64),
            other => return config_err(format!("unknown sweep key `{other}`")),
        }
        Ok(())
    }
}

fn apply_params(params: &mut BoundParams, args: &BoundsArgs) {
    if let Some(v) = args.a {
        params.a = v;
    }
    if let Some(v) = args.m {
        params.m = v;
    }
    if let Some(v) = args.v {
        params.v = v;
    }
    if let Some(v) = args.d {
        params.d = v;
    }
    if let Some(v) = args.c {
        params.c = v;
    }
    if let Some(v) = args.gamma {
        params.gamma = v;
    }
    if let Some(v) = args.epsilon {
        params.epsilon = v;
    }
    if let Some(v) = args.delta {
        params.delta = v;
    }
    if let Some(v) = args.k {
        params.k = v;
    }
    if let Some(v) = args.k_p {
        params.k_p = v;
    }
    if let Some(v) = args.k1 {
        params.k1 = v;
    }
    if let Some(v) = args.k2 {
        params.k2 = v;
    }
    if let Some(v) = args.k3 {
        params.k3 = v;
    }
    if let Some(v) = args.k_f {
        params.k_f = v;
    }
}

type CsvRows = Vec<Vec<CsvCell>>;

fn run_bounds(resolved: &ResolvedBounds) -> Result<(serde_json::Value, Option<(String, CsvRows)>)> {
    match &resolved.sweep {
        None => {
            let report = resolved.evaluate()?;
            Ok((serde_json::to_value(&report)?, None))
        }
        Some(spec) => {
            let mut rows: CsvRows = Vec::with_capacity(spec.steps);
            let mut last = None;
            for value in spec.values() {
                let mut point = resolved.clone();
                point.sweep = None;
                point.set_key(&spec.key, value)?;
                let report = point.evaluate()?;
                rows.push(vec![
                    CsvCell::Real(value),
                    CsvCell::Real(report.value),
                    CsvCell::Str(report.flags.join(";")),
                ]);
                last = Some(report);
            }
            let results = json!({
                "sweep_key": spec.key,
                "points": spec.steps,
                "last": last,
            });
            Ok((results, Some((spec.key.clone(), rows))))
        }
    }
}

// ---------------------------------------------------------------------------
// capacity
// ---------------------------------------------------------------------------

fn run_capacity(
    merged: &CapacityArgs,
    seed: u64,
) -> Result<(serde_json::Value, CsvRows, serde_json::Value)> {
    let class_spec: ClassSpec = match (&merged.class_path, &merged.class) {
        (Some(path), _) => load_config(path)?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => return config_err("missing class spec (--class PATH or config `class`)"),
    };
    let measure = merged
        .measure
        .ok_or_else(|| Error::Config("missing --measure".to_string()))?;
    let mode = merged.mode.clone().unwrap_or_else(|| {
        match measure {
            Measure::Pack => "greedy",
            _ => "exact",
        }
        .to_string()
    });
    let trials = merged.trials.unwrap_or(1000);
    let p = merged.p.unwrap_or(1.0);
    let epsilons: Vec<f64> = match (&merged.epsilons, merged.epsilon) {
        (Some(list), _) if !list.is_empty() => list.clone(),
        (_, Some(e)) => vec![e],
        _ if measure == Measure::Rademacher => vec![0.0],
        _ => return config_err("missing --epsilon (or --epsilons)"),
    };
    let class = class_spec.build(seed)?;

    let mut estimates: Vec<CapacityEstimate> = Vec::with_capacity(epsilons.len());
    for &eps in &epsilons {
        let estimate = match (measure, mode.as_str()) {
            (Measure::Cover, "exact") => {
                let matrix = DistanceMatrix::from_class(&class, p)?;
                let n = exact_covering(&matrix, eps)?;
                CapacityEstimate::new(
                    CapacityKind::Covering,
                    eps,
                    n as f64,
                    n as f64,
                    "exact-set-cover",
                    seed,
                    0,
                )?
            }
            (Measure::Cover, "greedy") => {
                let matrix = DistanceMatrix::from_class(&class, p)?;
                let greedy = greedy_packing(&matrix, eps)?;
                CapacityEstimate::new(
                    CapacityKind::Covering,
                    eps,
                    greedy.diagnostics["covering_lower"],
                    greedy.diagnostics["covering_upper"],
                    "greedy-sandwich",
                    seed,
                    greedy.work,
                )?
            }
            (Measure::Pack, "greedy") => {
                let matrix = DistanceMatrix::from_class(&class, p)?;
                let mut est = greedy_packing(&matrix, eps)?;
                est.seed = seed;
                est
            }
            (Measure::Fat, "exact") => fat_shattering_dimension(&class, eps, FatMode::Exact)?,
            (Measure::Fat, "randomized") => fat_shattering_dimension(
                &class,
                eps,
                FatMode::Randomized {
                    budget: trials,
                    seed,
                },
            )?,
            (Measure::Rademacher, "exact") => {
                rademacher_complexity(&class, RademacherMode::Exact)?
            }
            (Measure::Rademacher, "mc") => {
                rademacher_complexity(&class, RademacherMode::MonteCarlo { trials, seed })?
            }
            (m, other) => {
                return config_err(format!("mode `{other}` is not valid for measure {m:?}"))
            }
        };
        estimates.push(estimate);
    }

    let rows: CsvRows = estimates
        .iter()
        .map(|e| {
            vec![
                CsvCell::Real(e.scale),
                CsvCell::Real(e.lower),
                CsvCell::Real(e.upper),
                CsvCell::Str(e.method.clone()),
                CsvCell::Int(e.seed as i64),
            ]
        })
        .collect();

    let config_echo = json!({
        "class": class_spec,
        "measure": measure,
        "mode": mode,
        "trials": trials,
        "p": if p.is_infinite() { json!("inf") } else { json!(p) },
        "epsilons": epsilons,
        "class_size": class.len(),
        "class_points": class.num_points(),
    });
    let results = if estimates.len() == 1 {
        json!({ "estimate": estimates[0], "estimates": estimates })
    } else {
        json!({ "estimates": estimates })
    };
    Ok((results, rows, config_echo))
}

// ---------------------------------------------------------------------------
// deviation / mixing
// ---------------------------------------------------------------------------

fn run_experiment(
    merged: &ExperimentArgs,
    seed: u64,
    is_mixing: bool,
) -> Result<(serde_json::Value, CsvRows, serde_json::Value)> {
    let class_spec: ClassListSpec = match (&merged.class_path, &merged.class_spec) {
        (Some(path), _) => load_config(path)?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => {
            return config_err("missing class list (--classes PATH or config `class_spec`)")
        }
    };
    let dist_spec: DistSpec = match (&merged.dist_path, &merged.dist_spec) {
        (Some(path), _) => load_config(path)?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => {
            return config_err("missing distribution (--dist PATH or config `dist_spec`)")
        }
    };
    let n = merged
        .n
        .ok_or_else(|| Error::Config("missing --n".to_string()))?;
    let eps = merged
        .epsilon
        .ok_or_else(|| Error::Config("missing --epsilon".to_string()))?;
    let gamma = merged
        .gamma
        .ok_or_else(|| Error::Config("missing --gamma".to_string()))?;
    let trials = merged.trials.unwrap_or(100);

    let classes = class_spec.build(seed)?;
    let dist = dist_spec.build()?;

    let config_echo = json!({
        "class_spec": class_spec,
        "dist_spec": dist_spec,
        "n": n,
        "epsilon": eps,
        "gamma": gamma,
        "trials": trials,
        "rho": merged.rho,
        "a_n": merged.a_n,
    });

    let (results, sup_devs): (serde_json::Value, Vec<f64>) = if is_mixing {
        let rho = merged
            .rho
            .ok_or_else(|| Error::Config("mixing requires --rho".to_string()))?;
        let a_n = merged
            .a_n
            .ok_or_else(|| Error::Config("mixing requires --a-n".to_string()))?;
        let report =
            mixing_deviation_experiment(&classes, &dist, rho, n, a_n, eps, gamma, trials, seed)?;
        let devs = report.sup_deviations.clone();
        (serde_json::to_value(&report)?, devs)
    } else {
        let report = deviation_experiment(&classes, &dist, n, eps, gamma, trials, seed)?;
        let devs = report.sup_deviations.clone();
        (serde_json::to_value(&report)?, devs)
    };

    let rows: CsvRows = sup_devs
        .iter()
        .enumerate()
        .map(|(t, &d)| {
            vec![
                CsvCell::Int(t as i64),
                CsvCell::Real(d),
                CsvCell::Flag(d > eps),
            ]
        })
        .collect();
    Ok((results, rows, config_echo))
}

// ---------------------------------------------------------------------------
// sample-size
// ---------------------------------------------------------------------------

fn run_sample_size(merged: &SampleSizeArgs) -> Result<(serde_json::Value, serde_json::Value)> {
    let mut params = BoundParams::default();
    if let Some(v) = merged.a {
        params.a = v;
    }
    if let Some(v) = merged.m {
        params.m = v;
    }
    if let Some(v) = merged.v {
        params.v = v;
    }
    if let Some(v) = merged.d {
        params.d = v;
    }
    if let Some(v) = merged.c {
        params.c = v;
    }
    if let Some(v) = merged.gamma {
        params.gamma = v;
    }
    if let Some(v) = merged.epsilon {
        params.epsilon = v;
    }
    if let Some(v) = merged.delta {
        params.delta = v;
    }
    if let Some(v) = merged.k {
        params.k = v;
    }
    if let Some(v) = merged.k1 {
        params.k1 = v;
    }
    if let Some(v) = merged.k2 {
        params.k2 = v;
    }
    if let Some(v) = merged.k3 {
        params.k3 = v;
    }
    let variant = merged.variant.as_deref().unwrap_or("alon");
    let fat_choice = merged.fat.clone().unwrap_or_else(|| "bv".to_string());
    let config_echo = json!({
        "variant": variant,
        "params": params,
        "fat": fat_choice,
        "beta0": merged.beta0.unwrap_or(1.0),
        "beta": merged.beta.unwrap_or(1.0),
        "k_mix": merged.k_mix.unwrap_or(1.0),
        "k_prime": merged.k_prime.unwrap_or(1.0),
    });
    let results = match variant {
        "alon" | "cor2" => {
            let report = sample_size(parse_variant(variant)?, &params)?;
            serde_json::to_value(&report)?
        }
        "mixing-algebraic" | "mixing-exponential" => {
            let fat = if fat_choice == "bv" {
                FatFn::bv(&params)?
            } else {
                match fat_choice.parse::<f64>() {
                    Ok(v) if v >= 0.0 => FatFn::constant(v),
                    _ => return config_err("--fat must be \"bv\" or a nonnegative number"),
                }
            };
            let kind = if variant == "mixing-algebraic" {
                MixingKind::Algebraic {
                    beta0: merged.beta0.unwrap_or(1.0),
                    k: merged.k_mix.unwrap_or(1.0),
                }
            } else {
                MixingKind::Exponential {
                    beta0: merged.beta0.unwrap_or(1.0),
                    beta: merged.beta.unwrap_or(1.0),
                    k_prime: merged.k_prime.unwrap_or(1.0),
                }
            };
            let ec = effective_sample_complexity(kind, &params, &fat)?;
            serde_json::to_value(&ec)?
        }
        other => {
            return config_err(format!(
                "unknown variant `{other}` (expected alon | cor2 | mixing-algebraic | mixing-exponential)"
            ))
        }
    };
    Ok((results, config_echo))
}
