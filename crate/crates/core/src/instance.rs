//! Random instances and on-disk formats.
//!
//! Instance text format: the first line holds `n`, followed by `n` lines of
//! `n` whitespace-separated nonnegative integers (row `i` is consumer `i`).
//! Lines starting with `#` before the header carry optional `key: value`
//! metadata and are otherwise ignored.
//!
//! Instances are drawn from SplitMix64 seeded with the given 64-bit seed,
//! entries in row-major order, each uniform on `0..=max_value` via
//! `rand::Rng::gen_range` (rand 0.8 value-stable sampling).

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ValuationMatrix;

pub const DEFAULT_MAX_VALUE: u32 = 1_000_000;
pub const GENERATOR_NAME: &str = "splitmix64/rand-0.8-uniform";

pub fn generate(n: usize, seed: u64, max_value: u32) -> Result<ValuationMatrix> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let hi = i64::from(max_value);
    let values = (0..n * n).map(|_| rng.gen_range(0..=hi)).collect();
    ValuationMatrix::from_flat(n, values)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub matrix: ValuationMatrix,
    pub seed: Option<u64>,
    pub generator: Option<String>,
}

impl InstanceFile {
    pub fn new(matrix: ValuationMatrix) -> Self {
        Self { matrix, seed: None, generator: None }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(seed) = self.seed {
            writeln!(out, "# seed: {seed}").unwrap();
        }
        if let Some(generator) = &self.generator {
            writeln!(out, "# generator: {generator}").unwrap();
        }
        out.push_str(&serialize(&self.matrix));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut seed = None;
        let mut generator = None;
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        while let Some(&(line, l)) = lines.peek() {
            let Some(comment) = l.trim_start().strip_prefix('#') else {
                break;
            };
            if let Some((key, value)) = comment.split_once(':') {
                match key.trim() {
                    "seed" => {
                        let parsed = value.trim().parse().map_err(|_| Error::Parse {
                            line,
                            message: format!("invalid seed {:?}", value.trim()),
                        })?;
                        seed = Some(parsed);
                    }
                    "generator" => generator = Some(value.trim().to_string()),
                    _ => {}
                }
            }
            lines.next();
        }
        let matrix = parse_matrix(lines)?;
        Ok(Self { matrix, seed, generator })
    }
}

pub fn serialize(v: &ValuationMatrix) -> String {
    let mut out = format!("{}\n", v.n());
    for row in v.rows() {
        let mut first = true;
        for x in row {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{x}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<ValuationMatrix> {
    InstanceFile::parse(text).map(|f| f.matrix)
}

fn parse_matrix<'a>(mut lines: impl Iterator<Item = (usize, &'a str)>) -> Result<ValuationMatrix> {
    let (header_line, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
    let n: usize = match header.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            return Err(Error::Parse {
                line: header_line,
                message: format!("header must be a positive integer, got {:?}", header.trim()),
            })
        }
    };
    let mut values = Vec::with_capacity(n.saturating_mul(n));
    let mut rows = 0;
    let mut last_line = header_line;
    for (line, text) in lines {
        last_line = line;
        if text.trim().is_empty() {
            continue;
        }
        if rows == n {
            return Err(Error::Parse { line, message: format!("more than {n} rows") });
        }
        let before = values.len();
        for token in text.split_whitespace() {
            values.push(parse_value(line, token)?);
        }
        let len = values.len() - before;
        if len != n {
            return Err(Error::Parse { line, message: format!("expected {n} values, found {len}") });
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {n} rows, found {rows}"),
        });
    }
    ValuationMatrix::from_flat(n, values).map_err(|e| Error::Parse { line: header_line, message: e.to_string() })
}

fn parse_value(line: usize, token: &str) -> Result<i64> {
    match token.parse::<i64>() {
        Ok(v) if v < 0 => Err(Error::Parse { line, message: format!("negative valuation {v}") }),
        Ok(v) => Ok(v),
        Err(e) => {
            use std::num::IntErrorKind::*;
            let message = match e.kind() {
                PosOverflow | NegOverflow => format!("value {token} overflows 64-bit integers"),
                _ => format!("invalid integer {token:?}"),
            };
            Err(Error::Parse { line, message })
        }
    }
}

/// The method-independent part of a solve: allocation, utilities and prices.
/// Both pricing methods must produce byte-identical serializations of this.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub n: usize,
    /// `assignment[i]` is the item given to consumer `i`.
    pub assignment: Vec<usize>,
    pub weight: i64,
    /// Winner's utility for each item, indexed by item.
    pub utilities: Vec<i64>,
    /// Price of each item, indexed by item.
    pub prices: Vec<i64>,
    pub revenue: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub matching_seconds: f64,
    pub pricing_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub method: String,
    pub iterations_used: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// One solve, as written by `efpm solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub solution: Solution,
    pub run: RunInfo,
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

impl SolutionRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// `key value...` lines; one key per line.
    pub fn to_text(&self) -> String {
        let s = &self.solution;
        let mut out = String::new();
        writeln!(out, "n {}", s.n).unwrap();
        writeln!(out, "assignment {}", join(&s.assignment)).unwrap();
        writeln!(out, "weight {}", s.weight).unwrap();
        writeln!(out, "utilities {}", join(&s.utilities)).unwrap();
        writeln!(out, "prices {}", join(&s.prices)).unwrap();
        writeln!(out, "revenue {}", s.revenue).unwrap();
        writeln!(out, "method {}", self.run.method).unwrap();
        writeln!(out, "iterations_used {}", self.run.iterations_used).unwrap();
        if let Some(t) = self.run.timings {
            writeln!(out, "matching_seconds {}", t.matching_seconds).unwrap();
            writeln!(out, "pricing_seconds {}", t.pricing_seconds).unwrap();
        }
        out
    }

    /// Accepts either the JSON or the text form.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            });
        }
        parse_solution_text(text)
    }
}

fn parse_solution_text(text: &str) -> Result<SolutionRecord> {
    let mut fields = std::collections::HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        fields.insert(key.to_string(), (idx + 1, rest.trim().to_string()));
    }
    let get = |key: &str| {
        fields.get(key).ok_or_else(|| Error::Parse { line: 0, message: format!("missing field {key:?}") })
    };
    fn scalar<T: std::str::FromStr>(key: &str, (line, raw): &(usize, String)) -> Result<T> {
        raw.parse().map_err(|_| Error::Parse { line: *line, message: format!("bad value for {key}: {raw:?}") })
    }
    fn list<T: std::str::FromStr>(key: &str, (line, raw): &(usize, String)) -> Result<Vec<T>> {
        raw.split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse { line: *line, message: format!("bad entry in {key}: {t:?}") }))
            .collect()
    }
    let timings = match (fields.get("matching_seconds"), fields.get("pricing_seconds")) {
        (Some(m), Some(p)) => Some(Timings {
            matching_seconds: scalar("matching_seconds", m)?,
            pricing_seconds: scalar("pricing_seconds", p)?,
        }),
        _ => None,
    };
    Ok(SolutionRecord {
        solution: Solution {
            n: scalar("n", get("n")?)?,
            assignment: list("assignment", get("assignment")?)?,
            weight: scalar("weight", get("weight")?)?,
            utilities: list("utilities", get("utilities")?)?,
            prices: list("prices", get("prices")?)?,
            revenue: scalar("revenue", get("revenue")?)?,
        },
        run: RunInfo {
            method: get("method")?.1.clone(),
            iterations_used: scalar("iterations_used", get("iterations_used")?)?,
            timings,
        },
    })
}
