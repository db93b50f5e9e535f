//! Command-line front end for `polar-wef`.
//!
//! Every subcommand writes its result to standard output (or `--out`) and
//! reports failures on standard error as a single JSON object carrying a
//! machine-readable `error` code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use polar_wef::monomial_algebra::{
    compare, decreasing_violation, max_mixing_factor, max_mixing_factor_rate_half, Monomial,
    MAX_VARS,
};
use polar_wef::oracle::brute_force_wef;
use polar_wef::wd_engine::{CostEstimate, EngineConfig, Strategy, WdEngine};
use polar_wef::{CodeSpec, Error, WeightEnumerator};
use serde_json::{json, Value};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const REFUSED: i32 = 2;
    pub const INVARIANT: i32 = 3;
}

#[derive(Parser, Debug)]
#[command(
    name = "polar-wef",
    version,
    about = "Exact weight distributions of polar codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the full weight distribution of a code.
    Wef(WefArgs),
    /// Predict the number of coset evaluations for every route.
    Cost(SpecArg),
    /// Print the mixing factor (number of red bits) of a code.
    MixingFactor(SpecArg),
    /// Largest mixing factor over decreasing monomial codes of length 2^m.
    MaxMixingFactor {
        #[arg(long)]
        m: u32,
        /// Restrict to rate one half.
        #[arg(long)]
        rate_half: bool,
    },
    /// Compare two monomials in the monomial partial order.
    Compare {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Number of variables; defaults to the smallest that fits both.
        #[arg(long)]
        m: Option<u32>,
    },
    /// Check whether the unfrozen monomials form a decreasing set.
    IsDecreasing(SpecArg),
    /// Weight distribution by exhaustive enumeration (small codes only).
    BruteForce(SpecArg),
    /// Print the dual code as a spec document.
    Dual(SpecArg),
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Code spec JSON file.
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Args, Debug)]
struct WefArgs {
    /// Code spec JSON file.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value = "auto", value_parser = ["auto", "direct", "lta"])]
    strategy: String,
    /// Also consider computing the dual and applying MacWilliams.
    #[arg(long)]
    allow_dual: bool,
    /// Maximum coset evaluations, decimal or `2^e`.
    #[arg(long, value_parser = parse_budget)]
    budget: Option<BigUint>,
    /// Worker threads, 0 for all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Print `PROGRESS done/total` lines to standard error.
    #[arg(long)]
    progress: bool,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_budget(s: &str) -> Result<BigUint, String> {
    let s = s.trim();
    if let Some(e) = s.strip_prefix("2^") {
        let e: u32 = e.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
        return Ok(BigUint::from(1u32) << e);
    }
    s.parse()
        .map_err(|_| format!("{s:?} is not a non-negative integer"))
}

/// A failure together with its exit code.
#[derive(Debug)]
struct Failure {
    code: &'static str,
    exit: i32,
    message: String,
}

impl Failure {
    fn new(code: &'static str, exit: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            exit,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, exit) = match &e {
            Error::MalformedJson(_) => ("malformed_json", exit::USAGE),
            Error::Parse { .. } => ("parse_error", exit::USAGE),
            Error::BudgetExceeded { .. } => ("budget_exceeded", exit::REFUSED),
            Error::GuardExceeded { .. } => ("guard_exceeded", exit::REFUSED),
            Error::NotLinearCodeEnumerator(_) => ("invariant_violation", exit::INVARIANT),
            Error::NotDecreasing { .. } => ("not_decreasing", exit::USAGE),
            Error::NotPlain => ("not_plain", exit::USAGE),
            _ => ("invalid_spec", exit::USAGE),
        };
        Self::new(code, exit, e.to_string())
    }
}

type Outcome = Result<String, Failure>;

/// Runs the command line `args` (including the program name) and returns
/// the process exit code. Progress lines, when requested, go straight to
/// the process's standard error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return exit::OK;
            }
            let message = e.kind().as_str().unwrap_or("invalid arguments").to_string();
            report(stderr, &Failure::new("usage", exit::USAGE, message));
            let _ = write!(stderr, "{}", e.render());
            return exit::USAGE;
        }
    };
    match dispatch(cli.command, stderr) {
        Ok(text) => {
            if !text.is_empty() {
                let _ = writeln!(stdout, "{text}");
            }
            exit::OK
        }
        Err(f) => {
            report(stderr, &f);
            f.exit
        }
    }
}

fn report(stderr: &mut dyn Write, f: &Failure) {
    let _ = writeln!(
        stderr,
        "{}",
        json!({ "error": f.code, "message": f.message })
    );
}

fn load_spec(path: &Path) -> Result<CodeSpec, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new("io_error", exit::USAGE, format!("{}: {e}", path.display())))?;
    Ok(CodeSpec::from_json_str(&text)?)
}

fn wef_terms(wef: &WeightEnumerator) -> Value {
    Value::Array(
        wef.terms()
            .map(|(w, c)| json!([w, c.to_string()]))
            .collect(),
    )
}

fn opt_string(v: &Option<BigUint>) -> Value {
    v.as_ref()
        .map_or(Value::Null, |c| Value::String(c.to_string()))
}

fn check_total(wef: &WeightEnumerator, k: usize) -> Result<(), Failure> {
    let expected = BigUint::from(1u32) << k;
    if wef.eval_at_one() != expected {
        return Err(Failure::new(
            "invariant_violation",
            exit::INVARIANT,
            format!(
                "enumerator counts {} words, expected 2^{k}",
                wef.eval_at_one()
            ),
        ));
    }
    Ok(())
}

fn dispatch(command: Command, stderr: &mut dyn Write) -> Outcome {
    match command {
        Command::Wef(args) => wef(args),
        Command::Cost(a) => {
            let spec = load_spec(&a.spec)?;
            let est: CostEstimate = polar_wef::estimate_cost(&spec);
            let out = json!({
                "n": spec.n(),
                "k": spec.k(),
                "gamma": spec.profile().gamma,
                "direct_cosets": est.direct_cosets.to_string(),
                "lta_cosets": opt_string(&est.lta_cosets),
                "dual_direct_cosets": opt_string(&est.dual_direct_cosets),
                "dual_lta_cosets": opt_string(&est.dual_lta_cosets),
            });
            Ok(out.to_string())
        }
        Command::MixingFactor(a) => Ok(load_spec(&a.spec)?.profile().gamma.to_string()),
        Command::MaxMixingFactor { m, rate_half } => {
            if m == 0 || m > polar_wef::polar_transform::MAX_M {
                return Err(Failure::new(
                    "invalid_argument",
                    exit::USAGE,
                    format!("m = {m} out of range"),
                ));
            }
            let value = if rate_half {
                max_mixing_factor_rate_half(m)
            } else {
                max_mixing_factor(m).0
            };
            Ok(value.to_string())
        }
        Command::Compare { f, g, m } => {
            let m = match m {
                Some(m) => m,
                None => {
                    let wide = Monomial::parse(&f, MAX_VARS)?.mask()
                        | Monomial::parse(&g, MAX_VARS)?.mask();
                    (32 - wide.leading_zeros()).max(1)
                }
            };
            let (f, g) = (Monomial::parse(&f, m)?, Monomial::parse(&g, m)?);
            Ok(compare(&f, &g).as_str().to_string())
        }
        Command::IsDecreasing(a) => {
            let spec = load_spec(&a.spec)?;
            match decreasing_violation(&spec.unfrozen_monomials()) {
                None => Ok("true".into()),
                Some((lower, upper)) => {
                    let _ = writeln!(stderr, "{lower} precedes {upper} but is not unfrozen");
                    Ok("false".into())
                }
            }
        }
        Command::BruteForce(a) => {
            let spec = load_spec(&a.spec)?;
            let wef = brute_force_wef(&spec)?;
            check_total(&wef, spec.k())?;
            let out = json!({
                "n": spec.n(),
                "k": spec.k(),
                "route": "brute_force",
                "wef": wef_terms(&wef),
            });
            Ok(out.to_string())
        }
        Command::Dual(a) => Ok(load_spec(&a.spec)?.dual()?.to_json().to_string()),
    }
}

fn wef(args: WefArgs) -> Outcome {
    let spec = load_spec(&args.spec)?;
    let strategy: Strategy = args.strategy.parse()?;
    let mut config = EngineConfig {
        threads: args.threads,
        ..EngineConfig::default()
    };
    if let Some(b) = args.budget {
        config.budget = b;
    }
    if args.progress {
        config.progress = Some(Arc::new(|done, total| eprintln!("PROGRESS {done}/{total}")));
    }
    let engine = WdEngine::new(config)?;
    let (wef, report) = engine.wef_auto(&spec, strategy, args.allow_dual)?;
    check_total(&wef, spec.k())?;
    let out = json!({
        "n": report.n,
        "k": report.k,
        "route": report.route.as_str(),
        "cosets_evaluated": report.cosets_evaluated.to_string(),
        "wef": wef_terms(&wef),
    })
    .to_string();
    match args.out {
        Some(path) => {
            fs::write(&path, format!("{out}\n")).map_err(|e| {
                Failure::new("io_error", exit::USAGE, format!("{}: {e}", path.display()))
            })?;
            Ok(String::new())
        }
        None => Ok(out),
    }
}
