//! `mel`: membership checks, entropy evaluation, calculus queries,
//! equivalence runs and counterexample search.
//!
//! Exit codes: 0 pass or nothing found, 1 violation, 2 input error,
//! 3 numerical anomaly (the four checkers disagree).

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mel_core::entropy::matrix_phi_entropy;
use mel_core::membership::{
    cross_equivalence, random_canonical_measure, search_counterexample, EquivalenceReport, Outcome,
    SearchConfig, DEFAULT_TOL,
};
use mel_core::phi::{g_kernel, k_kernel, ScalarFunctionSpec};
use mel_core::rng;
use mel_core::spectral::{
    apply_univariate, bivariate_calculus, frechet_diff, frechet_diff_inverse, MatrixJson,
    SuperoperatorJson,
};
use serde::Serialize;
use serde_json::json;

use input::InputError;
use report::{emit, significant, RunConfig};

const EXIT_PASS: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_ANOMALY: u8 = 3;

/// Seed for randomized commands when neither `--seed` nor this variable is set.
const SEED_ENV: &str = "MEL_SEED";

#[derive(Parser)]
#[command(name = "mel", version, about = "Matrix entropy lab: functional calculus and membership checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the four membership checkers for each dimension.
    Check(CheckArgs),
    /// Evaluate H_φ(Z) = E Tr φ(Z) - Tr φ(E Z) for an ensemble.
    Entropy(EntropyArgs),
    /// Functional calculus queries.
    Calculus(CalculusArgs),
    /// Randomized search for a violation.
    Search(SearchArgs),
    /// Cross-check the four conditions over a suite of functions.
    EquivalenceSuite(SuiteArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Master seed; falls back to MEL_SEED, then to a random seed that is printed.
    #[arg(long)]
    seed: Option<u64>,
    /// Relative slack tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct CheckArgs {
    /// Function spec: inline JSON or a path.
    #[arg(long = "fn")]
    spec: String,
    /// Comma-separated dimensions.
    #[arg(long, default_value = "2", value_parser = input::dimensions)]
    n: std::vec::Vec<usize>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long = "fn")]
    spec: String,
    /// Ensemble: inline JSON or a path.
    #[arg(long)]
    ensemble: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CalculusOp {
    /// φ(x).
    Apply,
    /// dφ(x) h.
    Dfrechet,
    /// dφ(x)^{-1} h.
    DfrechetInv,
    /// The superoperator kernel(L_x, R_y) built from f = φ'.
    Bivariate,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kernel {
    /// (s - t) / (f(s) - f(t)).
    G,
    /// (f(t) - f(s)) / (t - s).
    K,
}

#[derive(Args)]
struct CalculusArgs {
    #[arg(value_enum)]
    op: CalculusOp,
    #[arg(long = "fn")]
    spec: String,
    /// Matrix x: inline JSON or a path.
    #[arg(long)]
    x: String,
    /// Direction h for dfrechet and dfrechet-inv.
    #[arg(long)]
    h: Option<String>,
    /// Second matrix for bivariate; defaults to x.
    #[arg(long)]
    y: Option<String>,
    #[arg(long, value_enum, default_value_t = Kernel::G)]
    kernel: Kernel,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long = "fn")]
    spec: String,
    /// Dimensions; the search escalates up to the largest.
    #[arg(long, default_value = "2", value_parser = input::dimensions)]
    n: std::vec::Vec<usize>,
    /// Total number of slack evaluations.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SuiteArgs {
    /// Function specs to include; repeatable. Without it a built-in suite runs.
    #[arg(long = "fn")]
    specs: Vec<String>,
    #[arg(long, default_value = "2,3,4", value_parser = input::dimensions)]
    n: std::vec::Vec<usize>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[command(flatten)]
    common: Common,
}

/// Outcome of a command: its report and exit code.
struct Finished {
    json: serde_json::Value,
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => run(&a.common.clone(), |c| check(a, c)),
        Command::Entropy(a) => run(&a.common.clone(), |c| entropy(a, c)),
        Command::Calculus(a) => run(&a.common.clone(), |c| calculus(a, c)),
        Command::Search(a) => run(&a.common.clone(), |c| search(a, c)),
        Command::EquivalenceSuite(a) => run(&a.common.clone(), |c| suite(a, c)),
    };
    ExitCode::from(result)
}

fn run(common: &Common, body: impl FnOnce(&Common) -> Result<Finished, InputError>) -> u8 {
    match body(common) {
        Ok(done) => match emit(common.format, common.out.as_deref(), &done.json, &done.text) {
            Ok(()) => done.code,
            Err(e) => {
                eprintln!("error: cannot write report: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, InputError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    if let Ok(value) = std::env::var(SEED_ENV) {
        let seed = value
            .trim()
            .parse()
            .map_err(|e| InputError(format!("{SEED_ENV}={value:?} is not a 64-bit seed: {e}")))?;
        eprintln!("seed: {seed} (from {SEED_ENV})");
        return Ok(seed);
    }
    let seed = rand::random();
    eprintln!("seed: {seed} (randomly chosen)");
    Ok(seed)
}

fn lib_error(e: mel_core::Error) -> InputError {
    InputError(e.to_string())
}

fn check(a: CheckArgs, common: &Common) -> Result<Finished, InputError> {
    let spec = input::spec(&a.spec)?;
    let seed = resolve_seed(common.seed)?;
    let config = RunConfig::new("check", common, seed).spec(&spec).dimensions(&a.n).trials(a.trials);
    let reports = a
        .n
        .iter()
        .map(|&n| cross_equivalence(&spec, n, a.trials, seed, common.tol))
        .collect::<mel_core::Result<Vec<_>>>()
        .map_err(lib_error)?;
    let code = exit_for(&reports);
    let text = report::equivalence_text(&config, &reports);
    let json = json!({ "config": config, "reports": reports });
    Ok(Finished { json, text, code })
}

fn exit_for(reports: &[EquivalenceReport]) -> u8 {
    if reports.iter().any(|r| r.outcome == Outcome::Anomaly) {
        EXIT_ANOMALY
    } else if reports.iter().any(|r| r.outcome == Outcome::Violation) {
        EXIT_VIOLATION
    } else {
        EXIT_PASS
    }
}

fn entropy(a: EntropyArgs, common: &Common) -> Result<Finished, InputError> {
    let spec = input::spec(&a.spec)?;
    let z = input::ensemble(&a.ensemble)?;
    let config = RunConfig::new("entropy", common, None).spec(&spec).dimensions(&[z.dim()]);
    let value = significant(matrix_phi_entropy(&spec, &z).map_err(lib_error)?);
    let text = format!("{value}\n");
    let json = json!({ "config": config, "outcomes": z.outcomes().len(), "entropy": value });
    Ok(Finished { json, text, code: EXIT_PASS })
}

fn calculus(a: CalculusArgs, common: &Common) -> Result<Finished, InputError> {
    let spec = input::spec(&a.spec)?;
    let x = input::matrix("--x", &a.x)?;
    let needs_h = || -> Result<_, InputError> {
        let arg = a.h.as_deref().ok_or_else(|| InputError(format!("{:?} needs --h", a.op)))?;
        input::matrix("--h", arg)
    };
    let mut config = RunConfig::new("calculus", common, None).spec(&spec).dimensions(&[x.dim()]);
    config.operation = Some(a.op);
    let role = spec.phi_role();
    let result = match a.op {
        CalculusOp::Apply => {
            serde_json::to_value(MatrixJson::from(apply_univariate(&role, &x).map_err(lib_error)?))
        }
        CalculusOp::Dfrechet => {
            let h = needs_h()?;
            serde_json::to_value(MatrixJson::from_matrix(&frechet_diff(&role, &x, h.as_matrix()).map_err(lib_error)?))
        }
        CalculusOp::DfrechetInv => {
            let h = needs_h()?;
            serde_json::to_value(MatrixJson::from_matrix(
                &frechet_diff_inverse(&role, &x, h.as_matrix()).map_err(lib_error)?,
            ))
        }
        CalculusOp::Bivariate => {
            config.kernel = Some(a.kernel);
            let y = match &a.y {
                Some(arg) => input::matrix("--y", arg)?,
                None => x.clone(),
            };
            let s = match a.kernel {
                Kernel::G => bivariate_calculus(|t, s| g_kernel(&spec, t, s), &x, &y),
                Kernel::K => bivariate_calculus(|t, s| k_kernel(&spec, t, s), &x, &y),
            }
            .map_err(lib_error)?;
            serde_json::to_value(SuperoperatorJson::from(&s))
        }
    }
    .expect("matrices serialize");
    let json = json!({ "config": config, "result": result });
    let text = serde_json::to_string_pretty(&result).expect("matrices serialize") + "\n";
    Ok(Finished { json, text, code: EXIT_PASS })
}

fn search(a: SearchArgs, common: &Common) -> Result<Finished, InputError> {
    let spec = input::spec(&a.spec)?;
    let seed = resolve_seed(common.seed)?;
    let n_max = a.n.iter().copied().max().unwrap_or(1);
    let config = RunConfig::new("search", common, seed).spec(&spec).dimensions(&a.n).budget(a.budget);
    let search = SearchConfig { n_max, budget: a.budget, seed, tol: common.tol };
    let outcome = search_counterexample(&spec, &search).map_err(lib_error)?;
    let code = if outcome.report.is_some() { EXIT_VIOLATION } else { EXIT_PASS };
    let text = report::search_text(&config, &outcome);
    let json = json!({ "config": config, "outcome": outcome });
    Ok(Finished { json, text, code })
}

/// Members, twenty random canonical measures drawn from the seed, and two
/// powers outside `[1, 2]`.
fn builtin_suite(seed: u64) -> Vec<ScalarFunctionSpec> {
    let mut specs = vec![ScalarFunctionSpec::Affine { c0: 0.0, c1: 1.0 }, ScalarFunctionSpec::StandardEntropy];
    specs.extend([1.0, 1.25, 1.5, 1.75, 2.0].map(|p| ScalarFunctionSpec::Power { p }));
    let mut r = rng::stream(seed, u64::MAX);
    specs.extend((0..20).map(|_| ScalarFunctionSpec::Canonical(random_canonical_measure(&mut r))));
    specs.extend([2.5, 3.0].map(|p| ScalarFunctionSpec::Power { p }));
    specs
}

fn suite(a: SuiteArgs, common: &Common) -> Result<Finished, InputError> {
    let seed = resolve_seed(common.seed)?;
    let specs = if a.specs.is_empty() {
        builtin_suite(seed)
    } else {
        a.specs.iter().map(|s| input::spec(s)).collect::<Result<_, _>>()?
    };
    let config = RunConfig::new("equivalence-suite", common, seed).dimensions(&a.n).trials(a.trials);
    let mut reports = vec![];
    for spec in &specs {
        for &n in &a.n {
            reports.push(cross_equivalence(spec, n, a.trials, seed, common.tol).map_err(lib_error)?);
        }
    }
    let anomalies = reports.iter().filter(|r| !r.agree).count();
    let code = if anomalies > 0 { EXIT_ANOMALY } else { EXIT_PASS };
    let text = report::suite_text(&config, &reports);
    let json = json!({ "config": config, "specs": specs.len(), "anomalies": anomalies, "reports": reports });
    Ok(Finished { json, text, code })
}
