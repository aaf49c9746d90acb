//! Valuation data, allocations, and the utility-gap matrix.
//!
//! Rows index consumers and columns index items. After reordering by an
//! allocation, index `i` names both item `i` and the consumer who won it, so
//! the gap matrix `u[j][k] = v'[j][k] - v'[k][k]` is the extra utility the
//! winner of item `j` would get from item `k` if `k` were priced at its own
//! winner's valuation.

use crate::error::{Error, Result};

/// Square matrix of nonnegative integer valuations, `v[i][j]` being consumer
/// `i`'s value for item `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationMatrix {
    n: usize,
    values: Vec<i64>,
}

impl ValuationMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut values = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), expected: n });
            }
            values.extend(r);
        }
        Self::from_flat(n, values)
    }

    /// Builds a matrix from row-major storage.
    pub fn from_flat(n: usize, values: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if values.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: values.len() });
        }
        // Gap sums along any cycle, and every utility iterate, stay within
        // (n + 1) * max in absolute value; keep a factor of two of headroom.
        let bound = i64::MAX / (2 * (n as i64 + 1));
        for (idx, &value) in values.iter().enumerate() {
            if value < 0 {
                return Err(Error::NegativeValuation { row: idx / n, col: idx % n, value });
            }
            if value > bound {
                return Err(Error::ValueTooLarge { n, value });
            }
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, consumer: usize, item: usize) -> i64 {
        self.values[consumer * self.n + item]
    }

    pub fn row(&self, consumer: usize) -> &[i64] {
        &self.values[consumer * self.n..(consumer + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.values.chunks_exact(self.n)
    }

    pub fn as_flat(&self) -> &[i64] {
        &self.values
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.rows().map(<[i64]>::to_vec).collect()
    }
}

/// A perfect matching of consumers to items together with its total value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    assignment: Vec<usize>,
    weight: i64,
}

impl Allocation {
    /// `assignment[i]` is the item given to consumer `i`.
    pub fn new(v: &ValuationMatrix, assignment: Vec<usize>) -> Result<Self> {
        let n = v.n();
        if assignment.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: assignment.len() });
        }
        let mut seen = vec![false; n];
        for (consumer, &item) in assignment.iter().enumerate() {
            if item >= n {
                return Err(Error::InvalidPermutation(format!(
                    "consumer {consumer} assigned item {item} out of range 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[item], true) {
                return Err(Error::InvalidPermutation(format!("item {item} assigned twice")));
            }
        }
        let weight = assignment.iter().enumerate().map(|(i, &j)| v.get(i, j)).sum();
        Ok(Self { assignment, weight })
    }

    pub fn identity(v: &ValuationMatrix) -> Self {
        Self::new(v, (0..v.n()).collect()).expect("identity is a permutation")
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn item_of(&self, consumer: usize) -> usize {
        self.assignment[consumer]
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Inverse permutation: `owners()[j]` is the consumer holding item `j`.
    pub fn owners(&self) -> Vec<usize> {
        let mut owners = vec![0; self.assignment.len()];
        for (consumer, &item) in self.assignment.iter().enumerate() {
            owners[item] = consumer;
        }
        owners
    }
}

/// `V' = X^T V`: row `i` is the valuation row of the consumer who won item `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReorderedValuation {
    n: usize,
    values: Vec<i64>,
}

impl ReorderedValuation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, item: usize, col: usize) -> i64 {
        self.values[item * self.n + col]
    }

    pub fn row(&self, item: usize) -> &[i64] {
        &self.values[item * self.n..(item + 1) * self.n]
    }

    /// Winning valuation of item `i`.
    pub fn diagonal(&self, item: usize) -> i64 {
        self.get(item, item)
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.diagonal(i)).sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.values.chunks_exact(self.n).map(<[i64]>::to_vec).collect()
    }
}

/// `u[j][k] = v'[j][k] - v'[k][k]`, zero on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityGapMatrix {
    n: usize,
    gaps: Vec<i64>,
}

impl UtilityGapMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> i64 {
        self.gaps[j * self.n + k]
    }

    pub fn row(&self, j: usize) -> &[i64] {
        &self.gaps[j * self.n..(j + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.gaps.chunks_exact(self.n).map(<[i64]>::to_vec).collect()
    }
}

pub fn reorder(v: &ValuationMatrix, a: &Allocation) -> Result<ReorderedValuation> {
    let n = v.n();
    if a.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.n() });
    }
    let mut values = Vec::with_capacity(n * n);
    for consumer in a.owners() {
        values.extend_from_slice(v.row(consumer));
    }
    Ok(ReorderedValuation { n, values })
}

pub fn build_gap_matrix(vp: &ReorderedValuation) -> UtilityGapMatrix {
    let n = vp.n();
    let diag: Vec<i64> = (0..n).map(|k| vp.diagonal(k)).collect();
    let mut gaps = Vec::with_capacity(n * n);
    for j in 0..n {
        gaps.extend(vp.row(j).iter().zip(&diag).map(|(&v, &d)| v - d));
    }
    UtilityGapMatrix { n, gaps }
}

/// Returns true iff every simple directed cycle with at most `max_cycle_len`
/// nodes has a nonpositive gap sum, where the step `a -> b` contributes
/// `u[b][a]`. Exponential in `max_cycle_len`; meant for small instances.
pub fn check_cycle_nonpositivity(u: &UtilityGapMatrix, max_cycle_len: usize) -> bool {
    let n = u.n();
    let max_len = max_cycle_len.min(n);
    let mut on_path = vec![false; n];
    // Each cycle is enumerated once from its smallest node.
    (0..n).all(|start| {
        on_path[start] = true;
        let ok = extend_cycles(u, start, start, 1, 0, max_len, &mut on_path);
        on_path[start] = false;
        ok
    })
}

fn extend_cycles(
    u: &UtilityGapMatrix,
    start: usize,
    last: usize,
    len: usize,
    sum: i64,
    max_len: usize,
    on_path: &mut [bool],
) -> bool {
    if len >= 2 && sum + u.get(start, last) > 0 {
        return false;
    }
    if len == max_len {
        return true;
    }
    for next in start + 1..u.n() {
        if on_path[next] {
            continue;
        }
        on_path[next] = true;
        let ok = extend_cycles(u, start, next, len + 1, sum + u.get(next, last), max_len, on_path);
        on_path[next] = false;
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vm(rows: &[&[i64]]) -> ValuationMatrix {
        ValuationMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_matrices() {
        assert_eq!(ValuationMatrix::from_rows(vec![]), Err(Error::Empty));
        assert!(matches!(
            ValuationMatrix::from_rows(vec![vec![1, 2], vec![3]]),
            Err(Error::NotSquare { row: 1, len: 1, expected: 2 })
        ));
        assert!(matches!(
            ValuationMatrix::from_rows(vec![vec![1, -2], vec![3, 4]]),
            Err(Error::NegativeValuation { row: 0, col: 1, value: -2 })
        ));
        assert!(matches!(
            ValuationMatrix::from_rows(vec![vec![i64::MAX / 4, 0], vec![0, 0]]),
            Err(Error::ValueTooLarge { .. })
        ));
    }

    #[test]
    fn allocation_validates_permutation() {
        let v = vm(&[&[3, 1], &[1, 2]]);
        assert!(Allocation::new(&v, vec![0, 0]).is_err());
        assert!(Allocation::new(&v, vec![0, 2]).is_err());
        assert!(matches!(
            Allocation::new(&v, vec![0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
        let a = Allocation::new(&v, vec![1, 0]).unwrap();
        assert_eq!(a.weight(), 2);
        assert_eq!(a.owners(), vec![1, 0]);
    }

    #[test]
    fn reorder_identity_and_swap() {
        let v = vm(&[&[3, 1], &[1, 2]]);
        let id = reorder(&v, &Allocation::identity(&v)).unwrap();
        assert_eq!(id.to_rows(), v.to_rows());
        assert_eq!(id.trace(), 5);

        let swap = reorder(&v, &Allocation::new(&v, vec![1, 0]).unwrap()).unwrap();
        assert_eq!(swap.to_rows(), vec![vec![1, 2], vec![3, 1]]);
        assert_eq!(swap.trace(), 2);
    }

    #[test]
    fn reorder_matches_permutation_matrix_product() {
        // X[i][j] = 1 iff consumer i holds item j; V' = X^T V.
        let v = vm(&[&[4, 0, 7], &[2, 9, 1], &[5, 3, 8]]);
        let a = Allocation::new(&v, vec![2, 0, 1]).unwrap();
        let n = 3;
        let mut product = vec![vec![0; n]; n];
        for (r, row) in product.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..n)
                    .map(|k| i64::from(a.item_of(k) == r) * v.get(k, c))
                    .sum();
            }
        }
        let vp = reorder(&v, &a).unwrap();
        assert_eq!(vp.to_rows(), product);
        assert_eq!(vp.trace(), a.weight());
    }

    #[test]
    fn reorder_rejects_mismatched_allocation() {
        let v2 = vm(&[&[3, 1], &[1, 2]]);
        let v3 = vm(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let a = Allocation::identity(&v3);
        assert!(matches!(reorder(&v2, &a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn gap_matrix_examples() {
        let v = vm(&[&[3, 1], &[1, 2]]);
        let u = build_gap_matrix(&reorder(&v, &Allocation::identity(&v)).unwrap());
        assert_eq!(u.to_rows(), vec![vec![0, -1], vec![-2, 0]]);

        let v = vm(&[&[5, 4], &[1, 2]]);
        let u = build_gap_matrix(&reorder(&v, &Allocation::identity(&v)).unwrap());
        assert_eq!(u.to_rows(), vec![vec![0, 2], vec![-4, 0]]);
    }

    #[test]
    fn gap_matrix_diagonal_only() {
        let v = vm(&[&[6, 0, 0], &[0, 2, 0], &[0, 0, 9]]);
        let u = build_gap_matrix(&reorder(&v, &Allocation::identity(&v)).unwrap());
        let diag = [6, 2, 9];
        for j in 0..3 {
            for k in 0..3 {
                let expected = if j == k { 0 } else { -diag[k] };
                assert_eq!(u.get(j, k), expected);
            }
        }
    }

    #[test]
    fn cycle_check_detects_suboptimal_swap() {
        let v = vm(&[&[0, 10], &[10, 0]]);
        let u = build_gap_matrix(&reorder(&v, &Allocation::identity(&v)).unwrap());
        assert_eq!(u.get(1, 0), 10);
        assert_eq!(u.get(0, 1), 10);
        assert!(!check_cycle_nonpositivity(&u, 2));
        // Cycles of a single node are trivially zero.
        assert!(check_cycle_nonpositivity(&u, 1));

        let opt = Allocation::new(&v, vec![1, 0]).unwrap();
        let u = build_gap_matrix(&reorder(&v, &opt).unwrap());
        assert!(check_cycle_nonpositivity(&u, 2));
    }

    #[test]
    fn cycle_check_single_node() {
        let v = vm(&[&[7]]);
        let u = build_gap_matrix(&reorder(&v, &Allocation::identity(&v)).unwrap());
        assert!(check_cycle_nonpositivity(&u, 1));
    }

    #[test]
    fn cycle_check_finds_three_cycle() {
        // Rotating items one step gives 3 * 10 versus 3 * 5 on the diagonal;
        // no two-item swap improves, so only the 3-cycle exposes it.
        let v = vm(&[&[5, 10, 0], &[0, 5, 10], &[10, 0, 5]]);
        let u = build_gap_matrix(&reorder(&v, &Allocation::identity(&v)).unwrap());
        assert!(check_cycle_nonpositivity(&u, 2));
        assert!(!check_cycle_nonpositivity(&u, 3));
    }
}
