//! Sorting a probability grid into a decreasing matrix without raising its mutual
//! information.
//!
//! A column pass sorts every column in non-increasing order (permuting row indexes, column
//! marginals untouched, row marginal majorized upward); a row pass does the same for
//! rows. Both passes can only lower the Shannon entropy of the affected marginal, so
//! alternating them never increases the mutual information, and the fixed point is a
//! decreasing matrix.

use serde::{Deserialize, Serialize};

use super::{tableau_mutual_information, Permutation, ProbabilityTableau};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// Sort each column; permutes row indexes.
    Columns,
    /// Sort each row; permutes column indexes.
    Rows,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPass {
    pub axis: Axis,
    /// Cell permutation applied by this pass (old row-major cell to new cell).
    pub permutation: Permutation,
    pub mutual_information: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Canonicalization {
    /// Composition of all column passes.
    pub row_perm: Permutation,
    /// Composition of all row passes.
    pub col_perm: Permutation,
    /// Total cell permutation in application order.
    pub permutation: Permutation,
    pub out: ProbabilityTableau,
    /// Number of column-then-row rounds, including the final confirming round.
    pub steps: usize,
    pub initial_mutual_information: f64,
    pub passes: Vec<CanonicalPass>,
}

fn sort_pass(pt: &ProbabilityTableau, axis: Axis) -> (ProbabilityTableau, Permutation) {
    let dims = pt.dims();
    let (d_a, d_b) = (dims.d_a, dims.d_b);
    let values = pt.values();
    let mut out = vec![0.0; values.len()];
    let mut mapping = vec![0; values.len()];
    // (number of lines, line length, line stride, step along a line)
    let (lines, len, stride, step) = match axis {
        Axis::Columns => (d_b, d_a, 1, d_b),
        Axis::Rows => (d_a, d_b, d_b, 1),
    };
    let cell = |line: usize, k: usize| line * stride + k * step;
    let mut order: Vec<usize> = Vec::with_capacity(len);
    for line in 0..lines {
        order.clear();
        order.extend(0..len);
        // Stable: equal entries keep their relative order.
        order.sort_by(|&x, &y| values[cell(line, y)].total_cmp(&values[cell(line, x)]));
        for (new_k, &old_k) in order.iter().enumerate() {
            out[cell(line, new_k)] = values[cell(line, old_k)];
            mapping[cell(line, old_k)] = cell(line, new_k);
        }
    }
    let out = ProbabilityTableau { dims, p: out };
    (out, Permutation { mapping })
}

/// Alternates column and row sorting passes until the grid is a decreasing matrix.
///
/// Fails with [`Error::NonTermination`] after `10 · d_A · d_B` passes.
pub fn canonicalize_decreasing(pt: &ProbabilityTableau) -> Result<Canonicalization> {
    let n = pt.dims().total();
    let cap = 10 * n;
    let initial = tableau_mutual_information(pt);
    let mut current = pt.clone();
    let mut row_perm = Permutation::identity(n);
    let mut col_perm = Permutation::identity(n);
    let mut total = Permutation::identity(n);
    let mut passes = Vec::new();
    let mut steps = 0;
    loop {
        if passes.len() + 2 > cap {
            return Err(Error::NonTermination {
                passes: passes.len(),
            });
        }
        steps += 1;
        for axis in [Axis::Columns, Axis::Rows] {
            let (next, perm) = sort_pass(&current, axis);
            match axis {
                Axis::Columns => row_perm = perm.after(&row_perm),
                Axis::Rows => col_perm = perm.after(&col_perm),
            }
            total = perm.after(&total);
            passes.push(CanonicalPass {
                axis,
                permutation: perm,
                mutual_information: tableau_mutual_information(&next),
            });
            current = next;
        }
        if current.is_decreasing() {
            break;
        }
    }
    Ok(Canonicalization {
        row_perm,
        col_perm,
        permutation: total,
        out: current,
        steps,
        initial_mutual_information: initial,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_decreasing_is_fixed() {
        let pt = ProbabilityTableau::from_rows(&[vec![0.5, 0.3], vec![0.15, 0.05]]).unwrap();
        let c = canonicalize_decreasing(&pt).unwrap();
        assert_eq!(c.steps, 1);
        assert!(
            c.row_perm.is_identity() && c.col_perm.is_identity() && c.permutation.is_identity()
        );
        assert_eq!(c.out, pt);
    }

    #[test]
    fn sorts_reversed_grid() {
        let pt = ProbabilityTableau::from_rows(&[vec![0.05, 0.3], vec![0.15, 0.5]]).unwrap();
        let c = canonicalize_decreasing(&pt).unwrap();
        assert_eq!(c.out.rows(), vec![vec![0.5, 0.15], vec![0.3, 0.05]]);
        assert!(c.out.is_decreasing());
        // The total permutation moves every entry to its final cell.
        for (old, &v) in pt.values().iter().enumerate() {
            assert_eq!(c.out.values()[c.permutation.image(old)], v);
        }
    }

    #[test]
    fn ties_are_stable() {
        let pt = ProbabilityTableau::from_rows(&[vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        let c = canonicalize_decreasing(&pt).unwrap();
        assert!(c.permutation.is_identity());
    }
}
