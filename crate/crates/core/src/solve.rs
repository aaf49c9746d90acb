//! Allocation followed by pricing, with per-phase wall-clock timings.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::Result;
use crate::instance::{RunInfo, Solution, SolutionRecord, Timings};
use crate::matching::solve_assignment;
use crate::model::{build_gap_matrix, reorder, Allocation, ReorderedValuation, UtilityGapMatrix, ValuationMatrix};
use crate::pricing::{prices_bellman_ford, prices_efpm, PriceVector, UtilityVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Efpm,
    BellmanFord,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Efpm, Method::BellmanFord];

    pub fn name(self) -> &'static str {
        match self {
            Method::Efpm => "efpm",
            Method::BellmanFord => "bellman-ford",
        }
    }

    pub fn price(self, u: &UtilityGapMatrix, vp: &ReorderedValuation) -> Result<(UtilityVector, PriceVector)> {
        match self {
            Method::Efpm => prices_efpm(u, vp),
            Method::BellmanFord => prices_bellman_ford(u, vp),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "efpm" => Ok(Method::Efpm),
            "bellman-ford" | "bf" => Ok(Method::BellmanFord),
            other => Err(format!("unknown method {other:?} (expected efpm or bellman-ford)")),
        }
    }
}

/// An optimal allocation with its reordered valuations and gap matrix, ready
/// for either pricing method.
#[derive(Debug, Clone)]
pub struct PreparedInstance {
    pub allocation: Allocation,
    pub reordered: ReorderedValuation,
    pub gaps: UtilityGapMatrix,
    pub matching_seconds: f64,
}

impl PreparedInstance {
    pub fn new(v: &ValuationMatrix) -> Self {
        let start = Instant::now();
        let allocation = solve_assignment(v).allocation;
        let matching_seconds = start.elapsed().as_secs_f64();
        let reordered = reorder(v, &allocation).expect("allocation built from the same matrix");
        let gaps = build_gap_matrix(&reordered);
        Self { allocation, reordered, gaps, matching_seconds }
    }

    pub fn price(&self, method: Method) -> Result<Priced> {
        let start = Instant::now();
        let (utilities, prices) = method.price(&self.gaps, &self.reordered)?;
        let pricing_seconds = start.elapsed().as_secs_f64();
        Ok(Priced { method, utilities, prices, pricing_seconds })
    }

    pub fn record(&self, priced: &Priced) -> SolutionRecord {
        SolutionRecord {
            solution: Solution {
                n: self.allocation.n(),
                assignment: self.allocation.assignment().to_vec(),
                weight: self.allocation.weight(),
                utilities: priced.utilities.y.clone(),
                prices: priced.prices.p.clone(),
                revenue: priced.prices.revenue,
            },
            run: RunInfo {
                method: priced.method.name().to_string(),
                iterations_used: priced.utilities.iterations_used,
                timings: Some(Timings {
                    matching_seconds: self.matching_seconds,
                    pricing_seconds: priced.pricing_seconds,
                }),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct Priced {
    pub method: Method,
    pub utilities: UtilityVector,
    pub prices: PriceVector,
    pub pricing_seconds: f64,
}

/// Matching then pricing; a pricing failure here means a solver bug, since
/// the allocation is optimal by construction.
pub fn solve(v: &ValuationMatrix, method: Method) -> Result<SolutionRecord> {
    let prepared = PreparedInstance::new(v);
    let priced = prepared.price(method)?;
    Ok(prepared.record(&priced))
}
