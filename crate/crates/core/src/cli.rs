//! `efpm` command-line frontend.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 internal error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, BenchConfig};
use crate::error::Error;
use crate::instance::{self, InstanceFile, SolutionRecord, DEFAULT_MAX_VALUE};
use crate::model::Allocation;
use crate::pricing::PriceVector;
use crate::solve::{solve, Method};
use crate::verify::check_envy_free;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "efpm", version, about = "Envy-free pricing for unit-demand perfect matchings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance with i.i.d. uniform integer valuations.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_VALUE)]
        max_value: u32,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute an optimal allocation and its revenue-maximizing envy-free prices.
    Solve {
        input: PathBuf,
        #[arg(long, default_value = "efpm", value_parser = parse_method)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Leave wall-clock timings out of the record so reruns are byte-identical.
        #[arg(long)]
        omit_timings: bool,
    },
    /// Check a solution record against its instance.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Time both pricing methods on paired random instances.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 15)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "methods", alias = "method", value_delimiter = ',', value_parser = parse_method,
              default_values_t = Method::ALL.to_vec())]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 0)]
        warmup: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_VALUE)]
        max_value: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the per-trial CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

/// An error together with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self { code: EXIT_INTERNAL, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonOptimalAllocation { .. } | Error::MethodMismatch { .. } => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::internal(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::internal(format!("cannot write to stdout: {e}"))),
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Gen { n, seed, max_value, out } => {
            let v = instance::generate(n as usize, seed, max_value)?;
            emit(out.as_deref(), &instance::serialize(&v))?;
            Ok(EXIT_OK)
        }
        Command::Solve { input, method, out, format, omit_timings } => {
            let v = InstanceFile::parse(&read(&input)?)?.matrix;
            let mut record = solve(&v, method)?;
            if omit_timings {
                record.run.timings = None;
            }
            let text = match format {
                Format::Json => record.to_json(),
                Format::Text => record.to_text(),
                Format::Csv => return Err(Failure::usage("solve supports --format text or json")),
            };
            emit(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Verify { instance, solution, format } => {
            let v = InstanceFile::parse(&read(&instance)?)?.matrix;
            let record = SolutionRecord::parse(&read(&solution)?)?;
            let s = &record.solution;
            if s.n != v.n() || s.assignment.len() != v.n() || s.prices.len() != v.n() {
                return Err(Failure::usage(format!(
                    "solution is for n = {} but the instance has n = {}",
                    s.n,
                    v.n()
                )));
            }
            let allocation = Allocation::new(&v, s.assignment.clone())?;
            let prices = PriceVector::new(s.prices.clone());
            let report = check_envy_free(&v, &allocation, &prices)?;
            let revenue_ok = prices.revenue == s.revenue;
            let weight_ok = allocation.weight() == s.weight;
            let text = match format {
                Format::Json => {
                    let mut doc = serde_json::to_value(&report).expect("report serializes");
                    doc["revenue_consistent"] = revenue_ok.into();
                    doc["weight_consistent"] = weight_ok.into();
                    format!("{}\n", serde_json::to_string_pretty(&doc).expect("json value"))
                }
                _ => render_envy_report(&report, revenue_ok, weight_ok),
            };
            emit(None, &text)?;
            Ok(if report.envy_free && revenue_ok && weight_ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Bench { sizes, trials, seed, methods, warmup, max_value, format, out } => {
            let mut unique = Vec::new();
            for m in methods {
                if !unique.contains(&m) {
                    unique.push(m);
                }
            }
            let config = BenchConfig { sizes, trials, seed, methods: unique, warmup, max_value };
            let report = run_bench(&config)?;
            let text = match format {
                Format::Text => report.to_text(),
                Format::Csv => report.trials_csv(),
                Format::Json => report.to_json(),
            };
            emit(None, &text)?;
            if let Some(path) = out {
                emit(Some(&path), &report.trials_csv())?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn render_envy_report(report: &crate::verify::EnvyReport, revenue_ok: bool, weight_ok: bool) -> String {
    let mut out = format!("envy_free: {}\n", report.envy_free);
    for v in &report.violations {
        out.push_str(&format!(
            "violation: consumer {} prefers item {} by {}\n",
            v.consumer, v.preferred_item, v.utility_gain
        ));
    }
    for c in &report.negative_utility_consumers {
        out.push_str(&format!("negative utility: consumer {c}\n"));
    }
    if !revenue_ok {
        out.push_str("revenue does not equal the sum of prices\n");
    }
    if !weight_ok {
        out.push_str("weight does not match the allocation\n");
    }
    out
}
