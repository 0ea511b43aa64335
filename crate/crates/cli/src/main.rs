use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lencalc_core::gamma::GammaValue;
use lencalc_core::io::{
    canonical_to_json, gamma_to_json, is_system, parse_ideal, parse_lengthfn, parse_spectrum, parse_system,
    parse_z_ideal, read_json, IoError, LengthFnFile,
};
use lencalc_core::lengths::{canonicalize, complete_layers, eval, validate_canonical, CanonicalLengthFn, Evaluator};
use lencalc_core::locsys::length_of_system;
use lencalc_core::scenario::{default_cases, run_scenario, SCENARIOS};
use lencalc_core::spectrum::{PrimeId, SpectrumTree};
use lencalc_core::zmod::{eval_z, ZLengthFn};

const EXIT_FAILURES: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SEMANTIC: u8 = 3;

#[derive(Parser)]
#[command(name = "lencalc", version, about = "Exact length functions over the integers and finite Prüfer spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Value of a length function on D/I. Without --spectrum the integers
    /// are used and the ideal is "unit", "zero" or {"generator": n}.
    Eval {
        #[arg(long)]
        spectrum: Option<PathBuf>,
        #[arg(long)]
        lengthfn: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Canonical form of a length function or localizing system on a tree.
    Canonicalize {
        #[arg(long)]
        spectrum: PathBuf,
        /// A length-function file or a system file ({"spectral": [...]} or {"zero_locus": ...}).
        #[arg(long)]
        lengthfn: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a named verification suite.
    Scenario {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Semantic(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Parse(m) => Failure::Usage(m),
            IoError::Semantic(m) => Failure::Semantic(m),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Semantic(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_SEMANTIC)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Eval { spectrum, lengthfn, ideal, format } => {
            let value = match spectrum {
                Some(path) => {
                    let tree = parse_spectrum(&read_json(&path)?)?;
                    let l = tree_function(&tree, parse_lengthfn(&read_json(&lengthfn)?, Some(&tree))?)?;
                    let i = parse_ideal(&read_json(&ideal)?, &tree)?;
                    eval(&tree, &l, &i)
                }
                None => {
                    let l = match parse_lengthfn(&read_json(&lengthfn)?, None)? {
                        LengthFnFile::RankMultiple(a) => ZLengthFn::RankMultiple(a),
                        LengthFnFile::ZWeights(l) => l,
                        LengthFnFile::Canonical(_) => unreachable!("canonical forms need a tree"),
                    };
                    eval_z(&l, &parse_z_ideal(&read_json(&ideal)?)?.quotient())
                }
            };
            print_value(&value, format);
            Ok(0)
        }
        Command::Canonicalize { spectrum, lengthfn, format } => {
            let tree = parse_spectrum(&read_json(&spectrum)?)?;
            let input = read_json(&lengthfn)?;
            let result = if is_system(&input) {
                canonicalize(&tree, &length_of_system(&parse_system(&input, &tree)?))
            } else {
                let l = tree_function(&tree, parse_lengthfn(&input, Some(&tree))?)?;
                canonicalize(&tree, &Evaluator::new(&tree, l))
            };
            let l = result.map_err(|e| Failure::Semantic(e.to_string()))?;
            match format {
                Format::Json => println!("{}", pretty(&canonical_to_json(&tree, &l))),
                Format::Text => println!("{}", l.display(&tree)),
            }
            Ok(0)
        }
        Command::Scenario { name, seed, cases, format } => {
            let Some(default) = default_cases(&name) else {
                return Err(Failure::Usage(format!(
                    "unknown scenario {name:?}; expected one of {}",
                    SCENARIOS.join(", ")
                )));
            };
            let report = run_scenario(&name, seed, cases.unwrap_or(default))
                .map_err(|e| Failure::Usage(e.to_string()))?;
            match format {
                Format::Json => println!("{}", pretty(&report.to_json())),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(if report.ok() { 0 } else { EXIT_FAILURES })
        }
    }
}

/// A validated canonical form on `tree`; `rank_multiple` is `α·rk_(0)`.
/// Missing layers are filled in first, since that never changes a value.
fn tree_function(tree: &SpectrumTree, file: LengthFnFile) -> Result<CanonicalLengthFn, Failure> {
    let l = match file {
        LengthFnFile::Canonical(l) => l,
        LengthFnFile::RankMultiple(a) => {
            let mut l = CanonicalLengthFn::zero();
            l.sigma_r.insert(PrimeId::ROOT, a);
            l
        }
        LengthFnFile::ZWeights(_) => {
            return Err(Failure::Semantic("z_weights describe a function on the integers; drop --spectrum".into()))
        }
    };
    let l = complete_layers(tree, &l);
    validate_canonical(tree, &l).map_err(|vs| {
        Failure::Semantic(vs.iter().map(|v| v.describe(tree)).collect::<Vec<_>>().join("; "))
    })?;
    Ok(l)
}

fn print_value(value: &GammaValue, format: Format) {
    match format {
        Format::Text => println!("{value}"),
        Format::Json => println!("{}", json!({ "value": gamma_to_json(value) })),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json renders")
}
