//! Regular Young tableaux on the `d_A × d_B` rectangle and the probability grids they index.
//!
//! Eigenvalues are sorted descending and value `k` in a tableau marks the cell that
//! receives the `k`-th largest eigenvalue. Regular tableaux (rows and columns strictly
//! increasing) are then exactly the arrangements that produce decreasing probability
//! matrices, which is the reduced search space for the encoder permutation.

mod canonical;
mod enumerate;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{shannon_entropy, BipartiteDims};
use crate::rng::rng_from_seed;

pub use canonical::{canonicalize_decreasing, Axis, CanonicalPass, Canonicalization};
pub use enumerate::{enumerate_regular, subtree_roots, RegularTableaux, TableauPrefix};

/// A filling of the `d_A × d_B` grid with `1..=d_A·d_B`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TableauRepr", into = "TableauRepr")]
pub struct YoungTableau {
    dims: BipartiteDims,
    cells: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct TableauRepr {
    d_a: usize,
    d_b: usize,
    rows: Vec<Vec<u32>>,
}

impl TryFrom<TableauRepr> for YoungTableau {
    type Error = Error;

    fn try_from(repr: TableauRepr) -> Result<Self> {
        let dims = BipartiteDims::new(repr.d_a, repr.d_b)?;
        if repr.rows.len() != dims.d_a || repr.rows.iter().any(|r| r.len() != dims.d_b) {
            return Err(Error::InvalidTableau(format!(
                "rows do not form a {dims} grid"
            )));
        }
        YoungTableau::new(dims, repr.rows.concat())
    }
}

impl From<YoungTableau> for TableauRepr {
    fn from(t: YoungTableau) -> Self {
        TableauRepr {
            d_a: t.dims.d_a,
            d_b: t.dims.d_b,
            rows: t.rows(),
        }
    }
}

impl YoungTableau {
    /// Validates that `cells` (row-major) is a permutation of `1..=d_A·d_B`.
    pub fn new(dims: BipartiteDims, cells: Vec<u32>) -> Result<Self> {
        let n = dims.total();
        if cells.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: cells.len(),
            });
        }
        let mut seen = vec![false; n];
        for &v in &cells {
            let idx = (v as usize).wrapping_sub(1);
            if idx >= n || seen[idx] {
                return Err(Error::InvalidTableau(format!(
                    "cells are not a permutation of 1..={n}"
                )));
            }
            seen[idx] = true;
        }
        Ok(Self { dims, cells })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let d_a = rows.len();
        let d_b = rows.first().map_or(0, Vec::len);
        TableauRepr {
            d_a,
            d_b,
            rows: rows.to_vec(),
        }
        .try_into()
    }

    /// The row-major filling `[[1, 2, ..], [d_B + 1, ..], ..]`.
    pub fn row_major(dims: BipartiteDims) -> Self {
        Self {
            dims,
            cells: (1..=dims.total() as u32).collect(),
        }
    }

    pub(crate) fn from_cells_unchecked(dims: BipartiteDims, cells: Vec<u32>) -> Self {
        debug_assert_eq!(cells.len(), dims.total());
        Self { dims, cells }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.dims.d_b + col]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.cells
            .chunks(self.dims.d_b)
            .map(<[u32]>::to_vec)
            .collect()
    }

    pub fn is_regular(&self) -> bool {
        is_regular(self)
    }

    pub fn transpose(&self) -> Self {
        let BipartiteDims { d_a, d_b } = self.dims;
        let cells = (0..d_b)
            .flat_map(|c| (0..d_a).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect();
        Self {
            dims: self.dims.transposed(),
            cells,
        }
    }

    /// `positions()[v - 1]` is the row-major cell holding value `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.cells.len()];
        for (cell, &v) in self.cells.iter().enumerate() {
            pos[v as usize - 1] = cell;
        }
        pos
    }

    /// Copy with the cells holding values `a` and `b` exchanged.
    pub fn swap_values(&self, a: u32, b: u32) -> Self {
        let pos = self.positions();
        let mut cells = self.cells.clone();
        cells.swap(pos[a as usize - 1], pos[b as usize - 1]);
        Self {
            dims: self.dims,
            cells,
        }
    }

    /// Whether the cell is larger than its left/upper neighbors and smaller than its
    /// right/lower neighbors.
    fn locally_regular(&self, cell: usize) -> bool {
        let d_b = self.dims.d_b;
        let (r, c) = (cell / d_b, cell % d_b);
        let v = self.cells[cell];
        (c == 0 || self.cells[cell - 1] < v)
            && (c + 1 == d_b || v < self.cells[cell + 1])
            && (r == 0 || self.cells[cell - d_b] < v)
            && (r + 1 == self.dims.d_a || v < self.cells[cell + d_b])
    }
}

impl std::fmt::Display for YoungTableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join(" / "))
    }
}

/// True iff every row increases left to right and every column top to bottom.
pub fn is_regular(t: &YoungTableau) -> bool {
    let BipartiteDims { d_a, d_b } = t.dims;
    let rows_ok = t
        .cells
        .chunks(d_b)
        .all(|row| row.windows(2).all(|w| w[0] < w[1]));
    let cols_ok = (0..(d_a - 1) * d_b).all(|k| t.cells[k] < t.cells[k + d_b]);
    rows_ok && cols_ok
}

/// Exact number of regular tableaux of the rectangle by the hook length formula.
pub fn count_regular(dims: BipartiteDims) -> BigUint {
    let n = dims.total() as u64;
    let numerator: BigUint = (1..=n).fold(BigUint::one(), |acc, k| acc * k);
    let hooks: BigUint = (0..dims.d_a)
        .flat_map(|r| (0..dims.d_b).map(move |c| (dims.d_a - r) + (dims.d_b - c) - 1))
        .fold(BigUint::one(), |acc, h| acc * h as u64);
    numerator / hooks
}

/// Cells whose upper and left neighbors are filled, given the filled length of each row.
fn admissible_rows(row_len: &[usize], d_b: usize) -> impl Iterator<Item = usize> + '_ {
    (0..row_len.len()).filter(move |&r| row_len[r] < d_b && (r == 0 || row_len[r - 1] > row_len[r]))
}

/// Fills `1..=d_A·d_B` in order, placing each value uniformly at random among the
/// currently admissible cells.
///
/// This is uniform per step, not uniform over tableaux.
pub fn random_regular_with<R: Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> YoungTableau {
    let mut cells = vec![0u32; dims.total()];
    let mut row_len = vec![0usize; dims.d_a];
    let mut choices = Vec::with_capacity(dims.d_a);
    for value in 1..=dims.total() as u32 {
        choices.clear();
        choices.extend(admissible_rows(&row_len, dims.d_b));
        let row = if choices.len() == 1 {
            choices[0]
        } else {
            choices[rng.random_range(0..choices.len())]
        };
        cells[row * dims.d_b + row_len[row]] = value;
        row_len[row] += 1;
    }
    YoungTableau::from_cells_unchecked(dims, cells)
}

pub fn random_regular(dims: BipartiteDims, seed: u64) -> YoungTableau {
    random_regular_with(dims, &mut rng_from_seed(seed))
}

/// Regular tableaux reachable by exchanging `i ↔ i+1` (`2 ≤ i ≤ n−1`) or `i ↔ i+2`
/// (`2 ≤ i ≤ n−2`), in that order. `t` must be regular.
pub fn neighbors(t: &YoungTableau) -> Vec<YoungTableau> {
    let n = t.cells.len() as u32;
    let pos = t.positions();
    let mut out: Vec<YoungTableau> = Vec::new();
    let swaps = (2..n)
        .map(|i| (i, i + 1))
        .chain((2..n.saturating_sub(1)).map(|i| (i, i + 2)));
    for (a, b) in swaps {
        let (ca, cb) = (pos[a as usize - 1], pos[b as usize - 1]);
        let mut cells = t.cells.clone();
        cells.swap(ca, cb);
        let candidate = YoungTableau {
            dims: t.dims,
            cells,
        };
        if candidate.locally_regular(ca)
            && candidate.locally_regular(cb)
            && !out.contains(&candidate)
        {
            out.push(candidate);
        }
    }
    out
}

/// A nonnegative `d_A × d_B` grid summing to one, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTableau {
    dims: BipartiteDims,
    p: Vec<f64>,
}

impl ProbabilityTableau {
    pub fn new(dims: BipartiteDims, p: Vec<f64>) -> Result<Self> {
        if p.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: p.len(),
            });
        }
        if let Some(bad) = p.iter().find(|&&x| x < -1e-12 || !x.is_finite()) {
            return Err(Error::InvalidDistribution(format!(
                "entry {bad} is negative or not finite"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, expected 1"
            )));
        }
        Ok(Self { dims, p })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dims = BipartiteDims::new(rows.len(), rows.first().map_or(0, Vec::len))?;
        if rows.iter().any(|r| r.len() != dims.d_b) {
            return Err(Error::InvalidDistribution("ragged rows".into()));
        }
        Self::new(dims, rows.concat())
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.p[row * self.dims.d_b + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.p.chunks(self.dims.d_b).map(<[f64]>::to_vec).collect()
    }

    /// Marginal of subsystem `A` (sum over each row).
    pub fn row_sums(&self) -> Vec<f64> {
        self.p
            .chunks(self.dims.d_b)
            .map(|r| r.iter().sum())
            .collect()
    }

    /// Marginal of subsystem `B` (sum over each column).
    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.dims.d_b];
        for row in self.p.chunks(self.dims.d_b) {
            for (s, x) in sums.iter_mut().zip(row) {
                *s += x;
            }
        }
        sums
    }

    /// Every row and every column is non-increasing.
    pub fn is_decreasing(&self) -> bool {
        let d_b = self.dims.d_b;
        let rows_ok = self
            .p
            .chunks(d_b)
            .all(|row| row.windows(2).all(|w| w[0] >= w[1]));
        let cols_ok = (0..self.p.len().saturating_sub(d_b)).all(|k| self.p[k] >= self.p[k + d_b]);
        rows_ok && cols_ok
    }
}

/// Places the `k`-th entry of `probs` into the cell of `t` holding value `k`.
pub fn arrange(probs: &[f64], t: &YoungTableau) -> Result<ProbabilityTableau> {
    if probs.len() != t.cells.len() {
        return Err(Error::DimensionMismatch {
            expected: t.cells.len(),
            found: probs.len(),
        });
    }
    let p = t.cells.iter().map(|&v| probs[v as usize - 1]).collect();
    ProbabilityTableau::new(t.dims, p)
}

/// Classical mutual information `H(rows) + H(cols) − H(entries)` of the grid, in nats.
pub fn tableau_mutual_information(pt: &ProbabilityTableau) -> f64 {
    shannon_entropy(&pt.row_sums()) + shannon_entropy(&pt.col_sums()) - shannon_entropy(&pt.p)
}

/// A bijection on `0..n`; `mapping[k]` is the image of `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::InvalidConfig("mapping is not a bijection".into()));
            }
            seen[m] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn image(&self, k: usize) -> usize {
        self.mapping[k]
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(k, &m)| k == m)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Permutation) -> Permutation {
        Permutation {
            mapping: first.mapping.iter().map(|&k| self.mapping[k]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.mapping.len()];
        for (k, &m) in self.mapping.iter().enumerate() {
            inv[m] = k;
        }
        Permutation { mapping: inv }
    }
}
