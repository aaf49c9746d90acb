//! Independent checks on pricing output.
//!
//! Nothing here calls into the pricing routines. The revenue oracle solves
//! each permutation's stability system with a max-plus Floyd-Warshall
//! closure, so it shares no code path with the utility iteration or the
//! Bellman-Ford baseline.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::for_each_permutation;
use crate::model::{build_gap_matrix, reorder, Allocation, UtilityGapMatrix, ValuationMatrix};
use crate::pricing::PriceVector;

pub const REVENUE_ORACLE_MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnvyViolation {
    pub consumer: usize,
    pub preferred_item: usize,
    /// How much more utility the consumer would get from `preferred_item`.
    pub utility_gain: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnvyReport {
    pub envy_free: bool,
    pub violations: Vec<EnvyViolation>,
    /// Consumers whose assigned item costs more than they value it.
    pub negative_utility_consumers: Vec<usize>,
}

/// Weak-preference envy check: ties between the assigned item and another
/// item are allowed.
pub fn check_envy_free(v: &ValuationMatrix, a: &Allocation, p: &PriceVector) -> Result<EnvyReport> {
    let n = v.n();
    for found in [a.n(), p.p.len()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    let mut violations = Vec::new();
    let mut negative_utility_consumers = Vec::new();
    for (consumer, row) in v.rows().enumerate() {
        let held = a.item_of(consumer);
        let own = row[held] - p.p[held];
        if own < 0 {
            negative_utility_consumers.push(consumer);
        }
        for (item, (&value, &price)) in row.iter().zip(&p.p).enumerate() {
            let utility = value - price;
            if utility > own {
                violations.push(EnvyViolation {
                    consumer,
                    preferred_item: item,
                    utility_gain: utility - own,
                });
            }
        }
    }
    Ok(EnvyReport {
        envy_free: violations.is_empty() && negative_utility_consumers.is_empty(),
        violations,
        negative_utility_consumers,
    })
}

/// Minimal stable utilities for a gap matrix via max-plus closure, or `None`
/// when some cycle has positive sum (the allocation cannot be supported by
/// envy-free prices).
pub fn stable_utilities_by_closure(u: &UtilityGapMatrix) -> Option<Vec<i64>> {
    let n = u.n();
    // best[j][k]: heaviest walk weight from k to j using steps a -> b worth u[b][a].
    let mut best = u.to_rows();
    for mid in 0..n {
        for j in 0..n {
            for k in 0..n {
                let through = best[j][mid] + best[mid][k];
                if through > best[j][k] {
                    best[j][k] = through;
                }
            }
        }
    }
    if (0..n).any(|j| best[j][j] > 0) {
        return None;
    }
    // The diagonal is zero, so the row maximum is already >= 0.
    Some(best.iter().map(|row| *row.iter().max().expect("n >= 1")).collect())
}

/// Best envy-free revenue over every allocation, by enumeration.
pub fn brute_force_max_revenue(v: &ValuationMatrix) -> Result<i64> {
    let n = v.n();
    if n > REVENUE_ORACLE_MAX_N {
        return Err(Error::InstanceTooLarge { n, max: REVENUE_ORACLE_MAX_N });
    }
    let mut best: Option<i64> = None;
    for_each_permutation(n, |perm| {
        let a = Allocation::new(v, perm.to_vec()).expect("enumerated permutation");
        let vp = reorder(v, &a).expect("dimensions agree");
        if let Some(y) = stable_utilities_by_closure(&build_gap_matrix(&vp)) {
            let revenue = vp.trace() - y.iter().sum::<i64>();
            best = Some(best.map_or(revenue, |b| b.max(revenue)));
        }
    });
    Ok(best.expect("a welfare-maximizing permutation always admits envy-free prices"))
}
