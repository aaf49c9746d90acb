//! Paired timing of the pricing methods on random instances.
//!
//! Every trial generates one instance, computes its optimal allocation once,
//! and then times each pricing method on the same gap matrix. Only the
//! pricing call is inside the timed region. The method order alternates
//! between trials so neither method always runs on a warm cache.

use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::instance::generate;
use crate::solve::{Method, PreparedInstance};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    /// Untimed pricing calls per method before the first trial of each size.
    pub warmup: usize,
    pub max_value: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub method: String,
    pub trial: usize,
    pub pricing_seconds: f64,
    pub matching_seconds: f64,
    pub iterations: usize,
}

/// Sample statistics with a two-sided Student-t confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Summary {
    /// Needs at least two samples for the sample deviation.
    pub fn of(samples: &[f64], confidence: f64) -> Option<Self> {
        let count = samples.len();
        if count < 2 {
            return None;
        }
        let mean = samples.iter().sum::<f64>() / count as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
        let std_dev = var.sqrt();
        let half = t_quantile(1.0 - (1.0 - confidence) / 2.0, count - 1) * std_dev / (count as f64).sqrt();
        Some(Self { count, mean, std_dev, ci_low: mean - half, ci_high: mean + half })
    }
}

pub fn t_quantile(p: f64, df: usize) -> f64 {
    StudentsT::new(0.0, 1.0, df as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub n: usize,
    pub method: String,
    pub pricing: Summary,
    pub mean_iterations: f64,
    pub mean_matching_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reduction {
    pub n: usize,
    /// `(1 - mean_efpm / mean_bellman_ford) * 100`.
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub seed: u64,
    pub trials: Vec<TrialRecord>,
    pub summaries: Vec<MethodSummary>,
    pub reductions: Vec<Reduction>,
}

pub const CSV_HEADER: &str = "n,method,trial,pricing_seconds,matching_seconds,iterations";

impl BenchReport {
    pub fn summary(&self, n: usize, method: Method) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.n == n && s.method == method.name())
    }

    pub fn reduction(&self, n: usize) -> Option<f64> {
        self.reductions.iter().find(|r| r.n == n).map(|r| r.percent)
    }

    /// Reduction pooled over all sizes, averaging the per-size percentages.
    pub fn overall_reduction(&self) -> Option<f64> {
        if self.reductions.is_empty() {
            return None;
        }
        Some(self.reductions.iter().map(|r| r.percent).sum::<f64>() / self.reductions.len() as f64)
    }

    pub fn trials_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for t in &self.trials {
            writeln!(
                out,
                "{},{},{},{:.9},{:.9},{}",
                t.n, t.method, t.trial, t.pricing_seconds, t.matching_seconds, t.iterations
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let with_reduction = !self.reductions.is_empty();
        let mut out = String::new();
        write!(
            out,
            "{:>7}  {:<13} {:>6}  {:>12}  {:>12}  {:>27}  {:>8}",
            "n", "method", "trials", "mean (s)", "std dev (s)", "95% CI (s)", "iters"
        )
        .unwrap();
        if with_reduction {
            out.push_str("  reduction");
        }
        out.push('\n');
        for s in &self.summaries {
            let ci = format!("({:.6}, {:.6})", s.pricing.ci_low, s.pricing.ci_high);
            write!(
                out,
                "{:>7}  {:<13} {:>6}  {:>12.6}  {:>12.6}  {:>27}  {:>8.2}",
                s.n, s.method, s.pricing.count, s.pricing.mean, s.pricing.std_dev, ci, s.mean_iterations
            )
            .unwrap();
            if with_reduction && s.method == Method::Efpm.name() {
                if let Some(r) = self.reduction(s.n) {
                    write!(out, "  {r:>8.1}%").unwrap();
                }
            }
            out.push('\n');
        }
        if let Some(r) = self.overall_reduction() {
            writeln!(out, "average pricing-time reduction of efpm vs bellman-ford: {r:.1}%").unwrap();
        }
        out
    }
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.sizes.is_empty() || config.sizes.contains(&0) {
        return Err(Error::InvalidArgument("sizes must be a nonempty list of positive integers".into()));
    }
    if config.trials < 2 {
        return Err(Error::InvalidArgument("at least two trials are needed for a confidence interval".into()));
    }
    let mut methods = config.methods.clone();
    methods.dedup();
    if methods.is_empty() {
        return Err(Error::InvalidArgument("no pricing methods selected".into()));
    }

    let mut seeds = SplitMix64::seed_from_u64(config.seed);
    let mut trials = Vec::new();
    for &n in &config.sizes {
        for trial in 0..config.trials {
            let v = generate(n, seeds.next_u64(), config.max_value)?;
            let prepared = PreparedInstance::new(&v);
            if trial == 0 {
                for &m in &methods {
                    for _ in 0..config.warmup {
                        prepared.price(m)?;
                    }
                }
            }
            let mut order = methods.clone();
            if trial % 2 == 1 {
                order.reverse();
            }
            let mut reference = None;
            for m in order {
                let priced = prepared.price(m)?;
                let solution = prepared.record(&priced).solution;
                match &reference {
                    None => reference = Some(solution),
                    Some(r) if *r != solution => return Err(Error::MethodMismatch { n, trial }),
                    Some(_) => {}
                }
                trials.push(TrialRecord {
                    n,
                    method: m.name().to_string(),
                    trial,
                    pricing_seconds: priced.pricing_seconds,
                    matching_seconds: prepared.matching_seconds,
                    iterations: priced.utilities.iterations_used,
                });
            }
        }
    }
    trials.sort_by(|a, b| (a.n, &a.method, a.trial).cmp(&(b.n, &b.method, b.trial)));

    let mut summaries = Vec::new();
    let mut reductions = Vec::new();
    for &n in &config.sizes {
        for &m in &methods {
            let rows: Vec<&TrialRecord> = trials.iter().filter(|t| t.n == n && t.method == m.name()).collect();
            let times: Vec<f64> = rows.iter().map(|t| t.pricing_seconds).collect();
            let count = rows.len() as f64;
            summaries.push(MethodSummary {
                n,
                method: m.name().to_string(),
                pricing: Summary::of(&times, 0.95).expect("trials >= 2"),
                mean_iterations: rows.iter().map(|t| t.iterations as f64).sum::<f64>() / count,
                mean_matching_seconds: rows.iter().map(|t| t.matching_seconds).sum::<f64>() / count,
            });
        }
        let mean_of = |m: Method| {
            summaries.iter().find(|s| s.n == n && s.method == m.name()).map(|s| s.pricing.mean)
        };
        if let (Some(efpm), Some(bf)) = (mean_of(Method::Efpm), mean_of(Method::BellmanFord)) {
            reductions.push(Reduction { n, percent: (1.0 - efpm / bf) * 100.0 });
        }
    }
    Ok(BenchReport { seed: config.seed, trials, summaries, reductions })
}
