//! Buyers' maximum utilities and revenue-maximizing envy-free prices.
//!
//! Given an optimal allocation's gap matrix `U`, the buyers' maximum utilities
//! are the smallest nonnegative `y` with `y[j] >= y[k] + u[j][k]` for all
//! `j != k`, and the optimal prices are `p[j] = v'[j][j] - y[j]`. Two routes
//! compute the same `y`:
//!
//! * [`prices_efpm`] iterates `y[j] <- max_k (y[k] + u[j][k])` from zero
//!   until nothing changes, at most `n - 1` sweeps after the first.
//! * [`prices_bellman_ford`] builds a network with a source arc of weight 0 to
//!   every item and an arc `k -> j` of weight `-u[j][k]`, then takes
//!   `y = -dist` from single-source shortest paths.
//!
//! Both report [`Error::NonOptimalAllocation`] when the allocation admits an
//! improving cycle, since then no finite fixed point exists.

use crate::error::{Error, Result};
use crate::model::{ReorderedValuation, UtilityGapMatrix};

/// Utility of each item's winner, indexed by item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityVector {
    pub y: Vec<i64>,
    /// Iteration count of the method that produced `y`: while-loop sweeps for
    /// [`prices_efpm`], relaxation passes for [`prices_bellman_ford`].
    pub iterations_used: usize,
}

impl UtilityVector {
    pub fn zeros(n: usize) -> Self {
        Self { y: vec![0; n], iterations_used: 0 }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.y.iter().sum()
    }
}

/// Item prices and the revenue they collect when every item sells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceVector {
    pub p: Vec<i64>,
    pub revenue: i64,
}

impl PriceVector {
    pub fn new(p: Vec<i64>) -> Self {
        let revenue = p.iter().sum();
        Self { p, revenue }
    }

    /// `p[j] = v'[j][j] - y[j]`.
    pub fn from_utilities(vp: &ReorderedValuation, y: &UtilityVector) -> Self {
        Self::new(y.y.iter().enumerate().map(|(j, &yj)| vp.diagonal(j) - yj).collect())
    }
}

/// One step of `y[j] <- max_k (y[k] + u[j][k])`, with `k` ranging over all
/// items including `j` itself.
pub fn iterate_once(u: &UtilityGapMatrix, y: &UtilityVector) -> UtilityVector {
    assert_eq!(u.n(), y.len(), "utility vector length must match the gap matrix");
    let mut next = vec![0; y.len()];
    sweep(u, &y.y, &mut next);
    UtilityVector { y: next, iterations_used: y.iterations_used + 1 }
}

/// Writes the next iterate into `next` and reports whether any entry moved.
fn sweep(u: &UtilityGapMatrix, y: &[i64], next: &mut [i64]) -> bool {
    let mut changed = false;
    for (j, out) in next.iter_mut().enumerate() {
        let best = shifted_row_max(u.row(j), y);
        changed |= best != y[j];
        *out = best;
    }
    changed
}

/// `max_k (row[k] + y[k])` over nonempty slices of equal length.
#[inline]
fn shifted_row_max(row: &[i64], y: &[i64]) -> i64 {
    const LANES: usize = 8;
    // Independent lanes keep the reduction from serializing on one register.
    let mut acc = [i64::MIN; LANES];
    let rows = row.chunks_exact(LANES);
    let ys = y.chunks_exact(LANES);
    let tail = rows.remainder().iter().zip(ys.remainder()).map(|(&g, &yk)| g + yk).max();
    for (g, yk) in rows.zip(ys) {
        for l in 0..LANES {
            acc[l] = acc[l].max(g[l] + yk[l]);
        }
    }
    acc.into_iter().chain(tail).max().expect("lanes are nonempty")
}

fn check_dims(u: &UtilityGapMatrix, vp: &ReorderedValuation) -> Result<()> {
    if u.n() != vp.n() {
        return Err(Error::DimensionMismatch { expected: vp.n(), found: u.n() });
    }
    Ok(())
}

/// Utility iteration from `y = 0`.
///
/// The first sweep produces `y[j] = max_k u[j][k]`; the loop then sweeps
/// while some entry still increases. On an optimal allocation this stops
/// after at most `n - 1` loop sweeps, which is what `iterations_used`
/// counts. If the `(n - 1)`-th loop sweep still changes something, the
/// allocation is not optimal and the call fails after `n` sweeps in total.
pub fn prices_efpm(
    u: &UtilityGapMatrix,
    vp: &ReorderedValuation,
) -> Result<(UtilityVector, PriceVector)> {
    check_dims(u, vp)?;
    let n = u.n();
    let mut prev = vec![0; n];
    let mut cur = vec![0; n];
    let mut changed = sweep(u, &prev, &mut cur);
    let mut sweeps = 0;
    while changed {
        if sweeps == n - 1 {
            return Err(Error::NonOptimalAllocation { sweeps: sweeps + 1 });
        }
        changed = sweep(u, &cur, &mut prev);
        std::mem::swap(&mut prev, &mut cur);
        sweeps += 1;
    }
    let y = UtilityVector { y: cur, iterations_used: sweeps };
    let p = PriceVector::from_utilities(vp, &y);
    Ok((y, p))
}

/// Shortest-path network for the pricing subproblem. Node 0 is the source;
/// item `j` is node `j + 1`.
#[derive(Debug, Clone)]
pub struct PricingNetwork {
    node_count: usize,
    /// `(from, to, weight)`; the `n` source arcs come first.
    edges: Vec<(usize, usize, i64)>,
}

impl PricingNetwork {
    pub fn from_gaps(u: &UtilityGapMatrix) -> Self {
        let n = u.n();
        let mut edges = Vec::with_capacity(n * n);
        edges.extend((0..n).map(|j| (0, j + 1, 0)));
        for k in 0..n {
            for j in (0..n).filter(|&j| j != k) {
                edges.push((k + 1, j + 1, -u.get(j, k)));
            }
        }
        Self { node_count: n + 1, edges }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Distances from the source to each item node, and the number of passes
    /// run. Only item arcs count as relaxations for the stopping rule: the
    /// source arcs settle every item at distance 0 during the first pass, so a
    /// shortest path needs at most `n - 1` further arcs and any relaxation on
    /// pass `n` means a negative cycle.
    pub fn shortest_distances(&self) -> Result<(Vec<i64>, usize)> {
        const UNREACHED: i64 = i64::MAX;
        let items = self.node_count - 1;
        let mut dist = vec![UNREACHED; self.node_count];
        dist[0] = 0;
        let (source_arcs, item_arcs) = self.edges.split_at(items);
        for pass in 1..=items {
            if pass == 1 {
                for &(from, to, w) in source_arcs {
                    dist[to] = dist[to].min(dist[from] + w);
                }
            }
            let mut relaxed = false;
            for &(from, to, w) in item_arcs {
                let candidate = dist[from] + w;
                if candidate < dist[to] {
                    dist[to] = candidate;
                    relaxed = true;
                }
            }
            if !relaxed {
                return Ok((dist.split_off(1), pass));
            }
        }
        Err(Error::NonOptimalAllocation { sweeps: items })
    }
}

/// Shortest-path baseline: `y[j] = -dist(source, j)`.
pub fn prices_bellman_ford(
    u: &UtilityGapMatrix,
    vp: &ReorderedValuation,
) -> Result<(UtilityVector, PriceVector)> {
    check_dims(u, vp)?;
    let (dist, passes) = PricingNetwork::from_gaps(u).shortest_distances()?;
    let y = UtilityVector { y: dist.into_iter().map(|d| -d).collect(), iterations_used: passes };
    let p = PriceVector::from_utilities(vp, &y);
    Ok((y, p))
}

/// `y[j] >= y[k] + u[j][k]` for every ordered pair `j != k`.
pub fn is_stable(u: &UtilityGapMatrix, y: &UtilityVector) -> bool {
    let n = u.n();
    y.len() == n
        && (0..n).all(|j| (0..n).all(|k| j == k || y.y[j] >= y.y[k] + u.get(j, k)))
}

/// True iff every item with positive utility is reached from a zero-utility
/// item through a chain of tight arcs (`y[j] == y[k] + u[j][k]`, `k != j`).
/// For a stable `y` such a forest proves no entry can be lowered.
pub fn minimality_certificate(u: &UtilityGapMatrix, y: &UtilityVector) -> bool {
    let n = u.n();
    if y.len() != n || y.y.iter().any(|&v| v < 0) {
        return false;
    }
    let mut grounded: Vec<bool> = y.y.iter().map(|&v| v == 0).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&j| grounded[j]).collect();
    while let Some(k) = queue.pop() {
        let yk = y.y[k];
        for (j, g) in grounded.iter_mut().enumerate() {
            if !*g && y.y[j] == yk + u.get(j, k) {
                *g = true;
                queue.push(j);
            }
        }
    }
    grounded.into_iter().all(|g| g)
}
