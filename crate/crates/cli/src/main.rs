//! Command-line driver for the exact debordering library: instance I/O,
//! the debordering and verification commands, a reproducible instance
//! generator, and small inspection helpers.
//!
//! Exit codes: 0 success; 1 I/O, parse, or size errors; 2 a requested limit
//! does not exist; 3 a rank precondition is violated; 4 an internal
//! certificate check failed (a bug); 5 verification found a coefficient
//! mismatch. Diagnostics go to stderr, data to files or stdout.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use deborder::{
    check_border_limit, close_principal_minors, deborder_general, generate, solve_split,
    to_canonical_json, DeborderReport, Error, InstanceFile, Matrix, MinorTable, MultilinearPoly,
    Rational, RationalFunction, Subset, ValuatedLinearMatroid, Valuation, DEFAULT_MAX_N,
};

const EXIT_IO: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_RANK: u8 = 3;
const EXIT_CERT: u8 = 4;
const EXIT_MISMATCH: u8 = 5;

#[derive(Parser)]
#[command(
    name = "deborder",
    version,
    about = "Exact debordering of rank-one symbolic determinant representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a border instance into an exact one over the rationals.
    Deborder {
        /// Instance file (kind rank_one_det).
        #[arg(long)]
        input: PathBuf,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check that a debordered instance computes the limit of the original.
    Verify {
        /// The original (border) instance file.
        original: PathBuf,
        /// The debordered instance file or a deborder report.
        debordered: PathBuf,
    },
    /// Generate a reproducible border instance with recorded ground truth.
    Generate {
        /// Number of variables.
        #[arg(long)]
        n: usize,
        /// Matrix order of the factors.
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Column scaling exponents are drawn from [-z-range, z-range].
        #[arg(long, default_value_t = 3)]
        z_range: i64,
        /// Unimodular row operations applied to each factor.
        #[arg(long, default_value_t = 4)]
        mixing_steps: usize,
        /// Also sample a constant block.
        #[arg(long)]
        with_a0: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Valuation and limit of an expression in eps, e.g. "(eps^2-1)/eps".
    Val { expr: String },
    /// All maximal minors of a matrix given as {"rows","cols","entries"}.
    Minors {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Weight-splitting certificate for a factor pair given as {"u","v"}.
    WeightSplit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Principal-minor closure for {"A": matrix, "k": size}.
    PmClosure {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::LimitUndefined { .. } => EXIT_LIMIT,
            Error::RankTooHigh { .. }
            | Error::RankDeficient { .. }
            | Error::RankMismatch { .. } => EXIT_RANK,
            Error::CertificateFailure(_) => EXIT_CERT,
            _ => EXIT_IO,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(EXIT_IO)
                }
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Deborder { input, output } => cmd_deborder(&input, output.as_deref()),
        Command::Verify {
            original,
            debordered,
        } => cmd_verify(&original, &debordered),
        Command::Generate {
            n,
            r,
            seed,
            z_range,
            mixing_steps,
            with_a0,
            output,
        } => cmd_generate(
            n,
            r,
            seed,
            z_range,
            mixing_steps,
            with_a0,
            output.as_deref(),
        ),
        Command::Val { expr } => cmd_val(&expr),
        Command::Minors { input, output } => cmd_minors(&input, output.as_deref()),
        Command::WeightSplit { input, output } => cmd_weight_split(&input, output.as_deref()),
        Command::PmClosure { input, output } => cmd_pm_closure(&input, output.as_deref()),
    }
}

/// Size cap from the environment; values above the built-in bound cannot
/// raise it, only lower it.
fn max_n() -> Result<usize, Failure> {
    match std::env::var("DEBORDER_MAX_N") {
        Err(_) => Ok(DEFAULT_MAX_N),
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::new(EXIT_IO, format!("invalid DEBORDER_MAX_N `{text}`"))),
    }
}

fn check_cap(n: usize) -> Result<(), Failure> {
    let cap = max_n()?;
    if n > cap {
        return Err(Failure::new(
            EXIT_IO,
            format!("instance has {n} ground elements, limit is {cap} (DEBORDER_MAX_N)"),
        ));
    }
    Ok(())
}

fn read_file(path: &std::path::Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&std::path::Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display()))),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_instance(path: &std::path::Path) -> Result<InstanceFile, Failure> {
    let text = read_file(path)?;
    let file = deborder::io::parse_instance_document(&text)?;
    let n = match &file.payload {
        deborder::InstancePayload::RankOneDet(inst) => inst.num_vars(),
        deborder::InstancePayload::PrincipalMinor(inst) => inst.size(),
    };
    check_cap(n)?;
    Ok(file)
}

fn cmd_deborder(input: &std::path::Path, output: Option<&std::path::Path>) -> Result<(), Failure> {
    let file = load_instance(input)?;
    let inst = file.as_rank_one()?;
    let out = deborder_general(inst)?;
    let report = DeborderReport::from_output(&out);
    emit(&to_canonical_json(&report), output)
}

#[derive(Serialize)]
struct VerifyReport {
    matched: bool,
    terms: usize,
}

fn cmd_verify(original: &std::path::Path, debordered: &std::path::Path) -> Result<(), Failure> {
    let original = load_instance(original)?;
    let debordered = load_instance(debordered)?;
    let original = original.as_rank_one()?;
    let debordered = debordered.as_rank_one()?;
    if original.num_vars() != debordered.num_vars() {
        return Err(Failure::new(
            EXIT_IO,
            format!(
                "variable counts differ: {} vs {}",
                original.num_vars(),
                debordered.num_vars()
            ),
        ));
    }
    let want = check_border_limit(original)?;
    let got = check_border_limit(debordered)?;
    if let Some(subset) = first_mismatch(&want, &got) {
        return Err(Failure::new(
            EXIT_MISMATCH,
            format!(
                "coefficient mismatch at subset {subset}: expected {}, found {}",
                want.coeff(&subset),
                got.coeff(&subset)
            ),
        ));
    }
    emit(
        &to_canonical_json(&VerifyReport {
            matched: true,
            terms: want.num_terms(),
        }),
        None,
    )
}

/// Lexicographically first subset whose coefficients differ.
fn first_mismatch(a: &MultilinearPoly<Rational>, b: &MultilinearPoly<Rational>) -> Option<Subset> {
    let mut keys: Vec<&Subset> = a
        .iter()
        .map(|(s, _)| s)
        .chain(b.iter().map(|(s, _)| s))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().find(|s| a.coeff(s) != b.coeff(s)).cloned()
}

fn cmd_generate(
    n: usize,
    r: usize,
    seed: u64,
    z_range: i64,
    mixing_steps: usize,
    with_a0: bool,
    output: Option<&std::path::Path>,
) -> Result<(), Failure> {
    check_cap(n)?;
    let spec = deborder::GeneratorSpec {
        n,
        r,
        seed,
        z_range,
        mixing_steps,
        include_a0: with_a0,
    };
    let generated = generate(&spec)?;
    let file = InstanceFile::rank_one(generated.instance).with_ground_truth(generated.ground_truth);
    emit(&to_canonical_json(&file), output)
}

#[derive(Serialize)]
struct ValReport {
    val: Valuation,
    limit: Option<Rational>,
}

fn cmd_val(expr: &str) -> Result<(), Failure> {
    let f = deborder::parse_rational_function(expr)?;
    let report = ValReport {
        val: f.valuation(),
        limit: f.limit0().ok(),
    };
    emit(&to_canonical_json(&report), None)
}

fn cmd_minors(input: &std::path::Path, output: Option<&std::path::Path>) -> Result<(), Failure> {
    let text = read_file(input)?;
    let m: Matrix<RationalFunction> = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_IO, format!("invalid matrix: {e}")))?;
    check_cap(m.cols())?;
    let table = m.minor_table_bulk(m.rows())?;
    emit(&to_canonical_json(&table), output)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorPairInput {
    u: Matrix<RationalFunction>,
    v: Matrix<RationalFunction>,
}

fn cmd_weight_split(
    input: &std::path::Path,
    output: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let text = read_file(input)?;
    let pair: FactorPairInput = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_IO, format!("invalid factor pair: {e}")))?;
    check_cap(pair.u.cols().max(pair.v.cols()))?;
    let m1 = ValuatedLinearMatroid::from_matrix(&pair.u)?;
    let m2 = ValuatedLinearMatroid::from_matrix(&pair.v)?;
    let cert = solve_split(&m1, &m2)?;
    emit(&to_canonical_json(&cert.to_json()), output)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PmInput {
    #[serde(rename = "A")]
    a: Matrix<RationalFunction>,
    k: usize,
}

#[derive(Serialize)]
struct PmReport {
    #[serde(rename = "B")]
    b: Matrix<Rational>,
    minors: MinorTable<Rational>,
}

fn cmd_pm_closure(
    input: &std::path::Path,
    output: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let text = read_file(input)?;
    // accept either an instance file or the bare {"A", "k"} form
    let inst = match deborder::io::parse_instance_document(&text) {
        Ok(file) => file.as_principal_minor()?.clone(),
        Err(_) => {
            let bare: PmInput = serde_json::from_str(&text)
                .map_err(|e| Failure::new(EXIT_IO, format!("invalid input: {e}")))?;
            deborder::PrincipalMinorInstance::new(bare.a, bare.k)?
        }
    };
    check_cap(inst.size())?;
    let closure = close_principal_minors(&inst)?;
    emit(
        &to_canonical_json(&PmReport {
            b: closure.b,
            minors: closure.minor_limits,
        }),
        output,
    )
}
