//! Normalized mutual information between two partitions.

use crate::detection::Partition;
use crate::error::{Error, Result};

/// Co-assignment counts between two partitions of the same vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    /// Row-major `rows x cols`.
    pub counts: Vec<usize>,
    pub rows: usize,
    pub cols: usize,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub total: usize,
}

impl ContingencyTable {
    pub fn new(x: &Partition, y: &Partition) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::VertexSetMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let rows = x.num_communities();
        let cols = y.num_communities();
        let mut counts = vec![0; rows * cols];
        let mut row_sums = vec![0; rows];
        let mut col_sums = vec![0; cols];
        for (&a, &b) in x.labels().iter().zip(y.labels()) {
            counts[a * cols + b] += 1;
            row_sums[a] += 1;
            col_sums[b] += 1;
        }
        Ok(Self {
            counts,
            rows,
            cols,
            row_sums,
            col_sums,
            total: x.len(),
        })
    }

    pub fn count(&self, a: usize, b: usize) -> usize {
        self.counts[a * self.cols + b]
    }

    /// True when every row and every column has exactly one nonzero cell,
    /// i.e. the partitions agree up to relabelling.
    fn is_matching(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|a| (0..self.cols).filter(|&b| self.count(a, b) > 0).count() == 1)
            && (0..self.cols).all(|b| (0..self.rows).filter(|&a| self.count(a, b) > 0).count() == 1)
    }
}

/// NMI with the combined-entropy normalization, natural log.
///
/// `-2 sum_ab n_ab ln(n_ab N / (n_a n_b)) / (sum_a n_a ln(n_a / N) + sum_b n_b ln(n_b / N))`
///
/// Partitions equal up to relabelling score exactly 1. When both are a
/// single community the formula is 0/0 and the score is 1; a single
/// community against anything else scores 0.
pub fn nmi(x: &Partition, y: &Partition) -> Result<f64> {
    let table = ContingencyTable::new(x, y)?;
    if table.is_matching() {
        return Ok(1.0);
    }
    let n = table.total as f64;
    let mut numerator = 0.0;
    for a in 0..table.rows {
        for b in 0..table.cols {
            let c = table.count(a, b);
            if c == 0 {
                continue;
            }
            let c = c as f64;
            let ratio = c * n / (table.row_sums[a] as f64 * table.col_sums[b] as f64);
            numerator -= 2.0 * c * ratio.ln();
        }
    }
    let entropy_term = |sums: &[usize]| -> f64 {
        sums.iter()
            .filter(|&&s| s > 0)
            .map(|&s| s as f64 * (s as f64 / n).ln())
            .sum()
    };
    let denominator = entropy_term(&table.row_sums) + entropy_term(&table.col_sums);
    if denominator == 0.0 {
        return Ok(0.0);
    }
    // Adding zero turns a -0.0 from a zero numerator into 0.0.
    Ok(numerator / denominator + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(labels: &[usize]) -> Partition {
        Partition::from_labels(labels)
    }

    #[test]
    fn identical_partitions() {
        let x = p(&[0, 0, 1, 1, 2, 2, 2]);
        assert_eq!(nmi(&x, &x).unwrap(), 1.0);
        assert_eq!(nmi(&x, &p(&[5, 5, 3, 3, 1, 1, 1])).unwrap(), 1.0);
    }

    #[test]
    fn crossing_partitions_are_independent() {
        let v = nmi(&p(&[0, 0, 1, 1]), &p(&[0, 1, 0, 1])).unwrap();
        assert!(v.abs() <= 1e-12);
    }

    #[test]
    fn single_community_degenerate_rule() {
        assert_eq!(nmi(&p(&[0, 0, 0, 0]), &p(&[0, 0, 1, 1])).unwrap(), 0.0);
        assert_eq!(nmi(&p(&[0, 1, 1, 0]), &p(&[0, 0, 0, 0])).unwrap(), 0.0);
        assert_eq!(nmi(&p(&[0, 0, 0]), &p(&[0, 0, 0])).unwrap(), 1.0);
    }

    #[test]
    fn mismatched_vertex_sets() {
        assert_eq!(
            nmi(&p(&[0, 1]), &p(&[0, 1, 1])).unwrap_err(),
            Error::VertexSetMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn partial_agreement_value() {
        // x = {0,1,2},{3,4,5}; y = {0,1},{2,3},{4,5}.
        // Within each x-block y splits 2:1, so H(y|x) = H(2/3, 1/3).
        let x = p(&[0, 0, 0, 1, 1, 1]);
        let y = p(&[0, 0, 1, 1, 2, 2]);
        let h = |ps: &[f64]| -> f64 { -ps.iter().map(|q| q * q.ln()).sum::<f64>() };
        let hx = h(&[0.5, 0.5]);
        let hy = h(&[1.0 / 3.0; 3]);
        let hy_given_x = h(&[2.0 / 3.0, 1.0 / 3.0]);
        let expected = 2.0 * (hy - hy_given_x) / (hx + hy);
        assert!((nmi(&x, &y).unwrap() - expected).abs() < 1e-12);
    }

    fn labels(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(0..k, n)
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(a in labels(30, 4), b in labels(30, 5)) {
            let (x, y) = (p(&a), p(&b));
            let forward = nmi(&x, &y).unwrap();
            let backward = nmi(&y, &x).unwrap();
            prop_assert!((forward - backward).abs() <= 1e-12);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&forward));
        }

        #[test]
        fn permutation_invariant(a in labels(25, 4), b in labels(25, 3), shift in 1usize..10) {
            let relabeled: Vec<usize> = a.iter().map(|l| (l + shift) * 3 + 1).collect();
            prop_assert_eq!(nmi(&p(&a), &p(&b)).unwrap(), nmi(&p(&relabeled), &p(&b)).unwrap());
        }
    }
}
