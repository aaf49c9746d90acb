//! Maximum-weight perfect matching on the complete consumer/item graph.
//!
//! `solve_assignment` runs the O(n^3) shortest augmenting path form of the
//! Hungarian method on the negated valuations, keeping row and column
//! potentials in plain arrays.

use crate::error::{Error, Result};
use crate::model::{Allocation, ValuationMatrix};

/// Largest instance the factorial oracle will accept.
pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Dual certificate for the maximization problem:
/// `row[i] + col[j] >= v[i][j]` everywhere, with equality on matched pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPotentials {
    pub row: Vec<i64>,
    pub col: Vec<i64>,
}

impl DualPotentials {
    pub fn total(&self) -> i64 {
        self.row.iter().sum::<i64>() + self.col.iter().sum::<i64>()
    }

    /// Checks feasibility on every pair and tightness on the matched pairs.
    pub fn certifies(&self, v: &ValuationMatrix, a: &Allocation) -> bool {
        let n = v.n();
        if self.row.len() != n || self.col.len() != n || a.n() != n {
            return false;
        }
        let feasible = (0..n).all(|i| (0..n).all(|j| self.row[i] + self.col[j] >= v.get(i, j)));
        let tight = (0..n).all(|i| self.row[i] + self.col[a.item_of(i)] == v.get(i, a.item_of(i)));
        feasible && tight && self.total() == a.weight()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    pub allocation: Allocation,
    pub dual_potentials: Option<DualPotentials>,
}

pub fn solve_assignment(v: &ValuationMatrix) -> MatchingResult {
    let n = v.n();
    // 1-based arrays; column 0 is the virtual column holding the row being
    // inserted. Costs are -v, so potentials satisfy pu[i] + pv[j] <= -v[i][j].
    let mut pu = vec![0i64; n + 1];
    let mut pv = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![i64::MAX; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        minv.fill(i64::MAX);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let vals = v.row(i0 - 1);
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = -vals[j - 1] - pu[i0] - pv[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                // Strict comparison keeps the lowest column among ties.
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    pu[owner[j]] += delta;
                    pv[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        while j0 != 0 {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    let allocation = Allocation::new(v, assignment).expect("augmenting paths yield a permutation");
    let dual_potentials = DualPotentials {
        row: pu[1..].iter().map(|&p| -p).collect(),
        col: pv[1..].iter().map(|&p| -p).collect(),
    };
    MatchingResult { allocation, dual_potentials: Some(dual_potentials) }
}

/// Exhaustive maximum over all `n!` permutations; ties resolve to the
/// lexicographically smallest assignment.
pub fn brute_force_assignment(v: &ValuationMatrix) -> Result<MatchingResult> {
    let n = v.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::InstanceTooLarge { n, max: BRUTE_FORCE_MAX_N });
    }
    let mut best: Option<(i64, Vec<usize>)> = None;
    for_each_permutation(n, |perm| {
        let w: i64 = perm.iter().enumerate().map(|(i, &j)| v.get(i, j)).sum();
        if best.as_ref().is_none_or(|(bw, _)| w > *bw) {
            best = Some((w, perm.to_vec()));
        }
    });
    let (_, assignment) = best.expect("n >= 1 has at least one permutation");
    Ok(MatchingResult { allocation: Allocation::new(v, assignment)?, dual_potentials: None })
}

/// Visits every permutation of `0..n` in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        f(&perm);
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let pivot = i - 1;
        let swap_with = (i..n).rev().find(|&j| perm[j] > perm[pivot]).expect("suffix has a larger element");
        perm.swap(pivot, swap_with);
        perm[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::SplitMix64;

    fn vm(rows: Vec<Vec<i64>>) -> ValuationMatrix {
        ValuationMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut seen = Vec::new();
        for_each_permutation(3, |p| seen.push(p.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
        let mut count = 0;
        for_each_permutation(1, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn small_examples() {
        let r = solve_assignment(&vm(vec![vec![3, 1], vec![1, 2]]));
        assert_eq!(r.allocation.assignment(), &[0, 1]);
        assert_eq!(r.allocation.weight(), 5);

        let r = solve_assignment(&vm(vec![vec![0, 10], vec![10, 0]]));
        assert_eq!(r.allocation.assignment(), &[1, 0]);
        assert_eq!(r.allocation.weight(), 20);

        let r = solve_assignment(&vm(vec![vec![7]]));
        assert_eq!(r.allocation.weight(), 7);
    }

    #[test]
    fn constant_matrix_returns_a_permutation() {
        let v = vm(vec![vec![4; 5]; 5]);
        let r = solve_assignment(&v);
        assert_eq!(r.allocation.weight(), 20);
        let mut items = r.allocation.assignment().to_vec();
        items.sort_unstable();
        assert_eq!(items, (0..5).collect::<Vec<_>>());
        assert!(r.dual_potentials.unwrap().certifies(&v, &r.allocation));
    }

    #[test]
    fn brute_force_examples_and_guard() {
        let r = brute_force_assignment(&vm(vec![vec![3, 1], vec![1, 2]])).unwrap();
        assert_eq!(r.allocation.weight(), 5);
        let r = brute_force_assignment(&vm(vec![vec![7]])).unwrap();
        assert_eq!(r.allocation.weight(), 7);
        // Ties resolve to the lexicographically first assignment.
        let r = brute_force_assignment(&vm(vec![vec![1; 3]; 3])).unwrap();
        assert_eq!(r.allocation.assignment(), &[0, 1, 2]);

        let big = vm(vec![vec![0; 11]; 11]);
        assert_eq!(
            brute_force_assignment(&big),
            Err(Error::InstanceTooLarge { n: 11, max: BRUTE_FORCE_MAX_N })
        );
    }

    #[test]
    fn matches_oracle_on_random_six_by_six() {
        let mut rng = SplitMix64::seed_from_u64(6);
        for _ in 0..50 {
            let rows = (0..6).map(|_| (0..6).map(|_| rng.gen_range(0..=1000)).collect()).collect();
            let v = vm(rows);
            let fast = solve_assignment(&v);
            let slow = brute_force_assignment(&v).unwrap();
            assert_eq!(fast.allocation.weight(), slow.allocation.weight());
            assert!(fast.dual_potentials.unwrap().certifies(&v, &fast.allocation));
        }
    }
}
