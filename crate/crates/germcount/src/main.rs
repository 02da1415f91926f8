//! Command-line front end: parse a germ file, run the requested
//! computation, emit a deterministic JSON or text report on stdout.
//!
//! Exit codes: 0 success; 1 internal inconsistency (the two counting routes
//! disagree); 2 input error; 3 a count failed to stabilize below the jet
//! bound.

use clap::{Parser, Subcommand, ValueEnum};
use germcount::afinite::{distinguish, invariant_n, verdict, AfiniteError};
use germcount::counting::{
    count_both, count_by_colength, count_by_formula, enumerate_stable_partitions, CountError,
    CountMethod,
};
use germcount::germ::{parse_germ_file, GermSpec};
use germcount::partition::Partition;
use germcount::report::{
    distinguish_envelope, distinguish_text, row_text, types_text, verdict_envelope, verdict_text,
    Row,
};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "germcount",
    version,
    about = "Exact stable-type counts and finiteness invariants for corank-1 map germs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Jet bound for the truncation engine (default 24, or GERMCOUNT_MAX_JET)
    #[arg(long, global = true)]
    max_jet: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Bind a parameter appearing in component expressions, e.g. --set a=1/2
    #[arg(long = "set", global = true, value_name = "NAME=VALUE")]
    set: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Colength,
    Formula,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// List the stable types of a source/target dimension pair
    Types {
        /// Germ file supplying the dimensions
        germ: Option<PathBuf>,
        /// Source dimension, with --p, instead of a germ file
        #[arg(long)]
        n: Option<usize>,
        /// Target dimension
        #[arg(long)]
        p: Option<usize>,
    },
    /// Count a zero-dimensional stable type
    Count {
        germ: PathBuf,
        /// Partition, comma separated, e.g. 2,1
        #[arg(long)]
        partition: String,
        /// Counting route; defaults to both routes when weights are available
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Count by the weighted-homogeneous closed form only
    Whcount {
        germ: PathBuf,
        #[arg(long)]
        partition: String,
    },
    /// Run the full finiteness screen over every stable type
    Afinite { germ: PathBuf },
    /// One invariant N(f,P)
    Invariant {
        germ: PathBuf,
        #[arg(long)]
        partition: String,
    },
    /// Compare all invariants of two germs with the same dimensions
    Distinguish { left: PathBuf, right: PathBuf },
}

const EXIT_INTERNAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NOT_FINITE: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn parse_bindings(pairs: &[String]) -> Result<BTreeMap<String, BigRational>, Failure> {
    let mut params = BTreeMap::new();
    for pair in pairs {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| fail(EXIT_INPUT, format!("--set needs NAME=VALUE, got {pair:?}")))?;
        let rational = BigRational::from_str(value.trim()).map_err(|e| {
            fail(
                EXIT_INPUT,
                format!("--set {name}: {value:?} is not a rational number: {e}"),
            )
        })?;
        params.insert(name.trim().to_string(), rational);
    }
    Ok(params)
}

fn load_germ(path: &Path, params: &BTreeMap<String, BigRational>) -> Result<GermSpec, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
    parse_germ_file(&bytes, params)
        .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn resolve_max_jet(flag: Option<u32>) -> Result<u32, Failure> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var("GERMCOUNT_MAX_JET") {
        Ok(s) => s.parse().map_err(|_| {
            fail(
                EXIT_INPUT,
                format!("GERMCOUNT_MAX_JET={s:?} is not a jet bound"),
            )
        }),
        Err(_) => Ok(24),
    }
}

fn parse_partition(s: &str) -> Result<Partition, Failure> {
    Partition::parse(s).map_err(|e| fail(EXIT_INPUT, format!("--partition {s:?}: {e}")))
}

fn count_failure(e: CountError) -> Failure {
    match e {
        CountError::NotFinite { partition, bound } => fail(
            EXIT_NOT_FINITE,
            format!("colength did not stabilize up to jet {bound} for {partition}"),
        ),
        other => fail(EXIT_INPUT, other.to_string()),
    }
}

fn afinite_failure(e: AfiniteError) -> Failure {
    match e {
        AfiniteError::Count(inner) => count_failure(inner),
        other => fail(EXIT_INPUT, other.to_string()),
    }
}

fn emit_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("report serialization")
    );
}

fn run(cli: Cli) -> Result<(), Failure> {
    let params = parse_bindings(&cli.set)?;
    let max_jet = resolve_max_jet(cli.max_jet)?;
    match cli.command {
        Command::Types { germ, n, p } => {
            let (label, n, p) = match (germ, n, p) {
                (Some(path), _, _) => {
                    let g = load_germ(&path, &params)?;
                    (g.name.clone(), g.n, g.p)
                }
                (None, Some(n), Some(p)) => (format!("({n},{p})"), n, p),
                _ => {
                    return Err(fail(
                        EXIT_INPUT,
                        "types needs a germ file or both --n and --p",
                    ))
                }
            };
            let descriptors =
                enumerate_stable_partitions(n, p).map_err(|e| fail(EXIT_INPUT, e.to_string()))?;
            let rows: Vec<Row> = descriptors
                .iter()
                .map(|d| Row::from_types(&label, n, p, d))
                .collect();
            match cli.output {
                Output::Json => emit_json(&rows),
                Output::Text => println!("{}", types_text(&rows)),
            }
        }
        Command::Count {
            germ,
            partition,
            method,
        } => {
            let g = load_germ(&germ, &params)?;
            let partition = parse_partition(&partition)?;
            let report = match method {
                Some(MethodArg::Colength) => count_by_colength(&g, &partition, max_jet),
                Some(MethodArg::Formula) => count_by_formula(&g, &partition),
                Some(MethodArg::Both) | None => count_both(&g, &partition, max_jet),
            }
            .map_err(count_failure)?;
            if report.method == CountMethod::Both && report.agreement == Some(false) {
                return Err(fail(
                    EXIT_INTERNAL,
                    format!(
                        "the two counting routes disagree on {} {}; neither value is trustworthy",
                        g.name, report.partition
                    ),
                ));
            }
            let row = Row::from_count(&g, &report);
            match cli.output {
                Output::Json => emit_json(&row),
                Output::Text => println!("{}", row_text(&row)),
            }
        }
        Command::Whcount { germ, partition } => {
            let g = load_germ(&germ, &params)?;
            let partition = parse_partition(&partition)?;
            let report = count_by_formula(&g, &partition).map_err(count_failure)?;
            let row = Row::from_count(&g, &report);
            match cli.output {
                Output::Json => emit_json(&row),
                Output::Text => println!("{}", row_text(&row)),
            }
        }
        Command::Afinite { germ } => {
            let g = load_germ(&germ, &params)?;
            let v = verdict(&g, max_jet).map_err(afinite_failure)?;
            let envelope = verdict_envelope(&g, &v, max_jet);
            match cli.output {
                Output::Json => emit_json(&envelope),
                Output::Text => println!("{}", verdict_text(&envelope)),
            }
        }
        Command::Invariant { germ, partition } => {
            let g = load_germ(&germ, &params)?;
            let partition = parse_partition(&partition)?;
            let report = invariant_n(&g, &partition, max_jet).map_err(afinite_failure)?;
            let row = Row::from_invariant(&g, &report);
            match cli.output {
                Output::Json => emit_json(&row),
                Output::Text => println!("{}", row_text(&row)),
            }
        }
        Command::Distinguish { left, right } => {
            let gl = load_germ(&left, &params)?;
            let gr = load_germ(&right, &params)?;
            let report = distinguish(&gl, &gr, max_jet).map_err(afinite_failure)?;
            let envelope = distinguish_envelope(&report);
            match cli.output {
                Output::Json => emit_json(&envelope),
                Output::Text => println!("{}", distinguish_text(&envelope)),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            eprintln!("germcount: {message}");
            ExitCode::from(code)
        }
    }
}
