//! The `west` command line.
//!
//! Exit codes: 0 success (`match`, `equivalent`, all checks passed), 1 the
//! negative answer (`no-match`, `inequivalent`, some check failed), 2 a
//! budget was exhausted, 64 usage error, 65 malformed formula or trace,
//! 70 internal error, 74 I/O error.

pub mod bench;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use west_core::equivalence::{formula_equivalence, EquivVerdict, ExpansionBudget};
use west_core::oracle::{oracle_check, OracleConfig, OracleError};
use west_core::syntax::concrete_to_text;
use west_core::{
    parse_formula, parse_trace, pretty, random_formulas, regex_to_text, simp_pad_west_reg, trace_to_text, west_reg,
    Formula, FormulaGenParams, Guard, ParseError,
};

use crate::bench::{bench_timing, summarize, write_csv, BenchItem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;
pub const EXIT_IO: i32 = 74;

/// Total bit strings an `equiv` run may expand across both sides.
pub const EXPANSION_LIMIT: u64 = 1 << 24;

#[derive(Debug, Parser)]
#[command(name = "west", version, about = "MLTL formulas and their trace regular expressions")]
pub struct Cli {
    /// Worker threads for parallel work (default: one per CPU).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the regex of a formula, one alternative per line.
    Regex {
        formula: String,
        /// Pad every alternative to the computation length and simplify.
        #[arg(long)]
        pad: bool,
        /// Print a JSON object instead of bare regex text.
        #[arg(long)]
        json: bool,
    },
    /// Check whether a trace matches the regex of a formula.
    Match {
        formula: String,
        /// Bit string such as `10,11,00`, one group per timestep.
        #[arg(long, allow_hyphen_values = true)]
        trace: String,
        #[arg(long)]
        pad: bool,
    },
    /// Decide whether two formulas accept the same traces.
    Equiv {
        formula1: String,
        formula2: String,
        /// Most free bits allowed in one padded alternative.
        #[arg(long, default_value_t = ExpansionBudget::DEFAULT_FREE_BITS)]
        budget: usize,
    },
    /// Check the transformation against the exhaustive oracle on a random batch.
    Validate {
        #[command(flatten)]
        gen: GenArgs,
        /// Skip formulas needing more than this many bits per enumerated trace.
        #[arg(long, default_value_t = west_core::oracle::DEFAULT_MAX_BITS)]
        max_bits: usize,
    },
    /// Print random formulas, one per line.
    Random {
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Time the padded transformation and write one CSV row per formula.
    Bench {
        /// File with one formula per line; blank lines and `#` comments are skipped.
        #[arg(long)]
        suite: Option<PathBuf>,
        #[command(flatten)]
        gen: GenArgs,
        /// Per-formula time limit in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Output CSV path (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Give up on a formula once an intermediate regex has more alternatives.
        #[arg(long)]
        max_alts: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 3)]
    pub nvars: usize,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value_t = 3)]
    pub bound: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Build every operator node from `U` and `R` only.
    #[arg(long)]
    pub nested_ur: bool,
}

impl GenArgs {
    fn params(&self) -> Result<FormulaGenParams, Failure> {
        if self.nvars == 0 {
            return Err(Failure::usage("--nvars must be at least 1"));
        }
        Ok(FormulaGenParams::new(self.nvars, self.depth, self.bound, self.seed, self.count).nested_ur(self.nested_ur))
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn parse(what: &str, e: ParseError) -> Self {
        Failure { code: EXIT_DATA, message: format!("{what}: {e}") }
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_INTERNAL, message: e.to_string() }
    }

    fn io(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_IO, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::io(e)
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write + Send,
    E: Write + Send,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = with_threads(cli.threads, || dispatch(cli.command, out, err));
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(threads: Option<u16>, work: impl FnOnce() -> Result<R, Failure> + Send) -> Result<R, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.into());
    }
    let pool = builder.build().map_err(Failure::internal)?;
    pool.install(work)
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R>(_threads: Option<u16>, work: impl FnOnce() -> Result<R, Failure>) -> Result<R, Failure> {
    work()
}

fn formula_arg(text: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(|e| Failure::parse("formula", e))
}

#[derive(Serialize)]
struct RegexJson {
    formula: String,
    regex: String,
    nvars: usize,
    complen: usize,
    alternatives: usize,
}

fn dispatch<O: Write, E: Write>(command: Command, out: &mut O, err: &mut E) -> Result<i32, Failure> {
    match command {
        Command::Regex { formula, pad, json } => {
            let f = formula_arg(&formula)?;
            let regex = if pad { simp_pad_west_reg(&f) } else { west_reg(&f) }.map_err(Failure::internal)?;
            if json {
                let body = RegexJson {
                    formula: pretty(&f),
                    regex: regex_to_text(&regex),
                    nvars: f.num_vars(),
                    complen: f.complen(),
                    alternatives: regex.len(),
                };
                serde_json::to_writer(&mut *out, &body).map_err(Failure::internal)?;
                writeln!(out)?;
            } else {
                writeln!(out, "{}", regex_to_text(&regex))?;
            }
            Ok(EXIT_OK)
        }
        Command::Match { formula, trace, pad } => {
            let f = formula_arg(&formula)?;
            let trace = parse_trace(&trace, f.num_vars()).map_err(|e| Failure::parse("trace", e))?;
            let regex = if pad { simp_pad_west_reg(&f) } else { west_reg(&f) }.map_err(Failure::internal)?;
            if regex.matches(&trace) {
                writeln!(out, "match")?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "no-match")?;
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Equiv { formula1, formula2, budget } => {
            let f1 = formula_arg(&formula1)?;
            let f2 = formula_arg(&formula2)?;
            let budget = ExpansionBudget::with_free_bits(budget).with_max_expansions(EXPANSION_LIMIT);
            let verdict = formula_equivalence(&f1, &f2, &budget, &Guard::unlimited()).map_err(Failure::internal)?;
            match verdict {
                EquivVerdict::Equivalent => {
                    writeln!(out, "equivalent")?;
                    Ok(EXIT_OK)
                }
                EquivVerdict::Inequivalent { witness } => {
                    writeln!(out, "inequivalent")?;
                    writeln!(out, "witness: {}", concrete_to_text(&witness))?;
                    Ok(EXIT_NEGATIVE)
                }
                EquivVerdict::LimitExceeded { reason, .. } => {
                    writeln!(out, "limit: {reason}")?;
                    Ok(EXIT_LIMIT)
                }
            }
        }
        Command::Validate { gen, max_bits } => validate(&gen.params()?, max_bits, out),
        Command::Random { gen } => {
            for f in random_formulas(&gen.params()?) {
                writeln!(out, "{}", pretty(&f))?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench { suite, gen, timeout, out: path, max_alts } => {
            if !(timeout.is_finite() && timeout > 0.0) {
                return Err(Failure::usage("--timeout must be a positive number of seconds"));
            }
            let items = match suite {
                Some(path) => read_suite(&path)?,
                None => {
                    let params = gen.params()?;
                    random_formulas(&params)
                        .into_iter()
                        .map(|formula| BenchItem { formula, n: params.n, d: params.d, b: params.b })
                        .collect()
                }
            };
            let records = bench_timing(&items, Duration::from_secs_f64(timeout), max_alts);
            let summary = summarize(&records);
            let mean = summary.mean_ms.map_or("-".to_string(), |m| format!("{m:.3}"));
            let line = format!(
                "ok {} timeout {} limit {} mean_ms {}",
                summary.ok, summary.timeout, summary.limit, mean
            );
            match path {
                Some(path) => {
                    let file = fs::File::create(&path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
                    write_csv(&records, file).map_err(Failure::io)?;
                    writeln!(out, "{line}")?;
                }
                None => {
                    write_csv(&records, &mut *out).map_err(Failure::io)?;
                    writeln!(err, "{line}")?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn read_suite(path: &PathBuf) -> Result<Vec<BenchItem>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty() && !line.trim_start().starts_with('#'))
        .map(|(i, line)| {
            parse_formula(line)
                .map(BenchItem::measured)
                .map_err(|e| Failure::parse(&format!("{}:{}", path.display(), i + 1), e))
        })
        .collect()
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ValidateCounts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

fn validate<O: Write>(params: &FormulaGenParams, max_bits: usize, out: &mut O) -> Result<i32, Failure> {
    let config = OracleConfig { max_bits };
    let formulas = random_formulas(params);
    let reports = par_map(&formulas, |f| oracle_check(f, &config));
    let mut counts = ValidateCounts::default();
    for (f, report) in formulas.iter().zip(reports) {
        match report {
            Ok(r) if r.passed() => counts.pass += 1,
            Ok(r) => {
                counts.fail += 1;
                let cex = r.counterexample.expect("failed report carries a counterexample");
                let trace = trace_to_text(&cex.trace, r.n).map_err(Failure::internal)?;
                writeln!(
                    out,
                    "FAIL {}  trace [{}]  satisfies={} raw={} padded={}",
                    pretty(f),
                    trace,
                    cex.satisfies,
                    cex.matches_raw,
                    cex.matches_padded
                )?;
            }
            Err(OracleError::TooLarge { .. }) => counts.skipped += 1,
            Err(e) => return Err(Failure::internal(e)),
        }
    }
    writeln!(out, "pass {} fail {} skipped {}", counts.pass, counts.fail, counts.skipped)?;
    Ok(if counts.fail == 0 { EXIT_OK } else { EXIT_NEGATIVE })
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}
