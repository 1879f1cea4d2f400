//! Streaming depth-first enumeration of regular tableaux.
//!
//! Values are placed in increasing order; value `k` may go into any cell whose upper and
//! left neighbors already hold smaller values. Choices are tried in row order, so the
//! stream is lexicographic in the sequence of rows receiving `2, 3, ..`. The state is a
//! single partial filling plus a choice stack, so memory is `O(d_A·d_B)` regardless of
//! the number of tableaux.

use super::{admissible_rows, YoungTableau};
use crate::qstate::BipartiteDims;

/// A partial filling holding `1..=placed`, used as the root of an enumeration subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauPrefix {
    dims: BipartiteDims,
    cells: Vec<u32>,
    row_len: Vec<usize>,
}

impl TableauPrefix {
    fn root(dims: BipartiteDims, exploit_symmetry: bool) -> Self {
        let mut prefix = Self {
            dims,
            cells: vec![0; dims.total()],
            row_len: vec![0; dims.d_a],
        };
        prefix.cells[0] = 1;
        prefix.row_len[0] = 1;
        // For square grids the transpose maps tableaux with 2 at (0, 1) onto those with
        // 2 at (1, 0) and preserves mutual information, so one class suffices.
        if exploit_symmetry && dims.is_square() && dims.d_b > 1 {
            prefix.cells[1] = 2;
            prefix.row_len[0] = 2;
        }
        prefix
    }

    pub fn placed(&self) -> usize {
        self.row_len.iter().sum()
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Start,
    Running,
    Done,
}

#[derive(Debug, Clone)]
struct Walker {
    dims: BipartiteDims,
    cells: Vec<u32>,
    row_len: Vec<usize>,
    stack: Vec<usize>,
    base: usize,
    target: usize,
    phase: Phase,
}

impl Walker {
    fn new(prefix: TableauPrefix, target: usize) -> Self {
        let base = prefix.placed();
        Self {
            dims: prefix.dims,
            cells: prefix.cells,
            row_len: prefix.row_len,
            stack: Vec::with_capacity(target.saturating_sub(base)),
            base,
            target: target.max(base),
            phase: Phase::Start,
        }
    }

    fn filled(&self) -> usize {
        self.base + self.stack.len()
    }

    fn place(&mut self, row: usize) {
        let value = self.filled() as u32 + 1;
        self.cells[row * self.dims.d_b + self.row_len[row]] = value;
        self.row_len[row] += 1;
        self.stack.push(row);
    }

    fn unplace(&mut self) -> Option<usize> {
        let row = self.stack.pop()?;
        self.row_len[row] -= 1;
        self.cells[row * self.dims.d_b + self.row_len[row]] = 0;
        Some(row)
    }

    fn descend(&mut self) {
        while self.filled() < self.target {
            let row = admissible_rows(&self.row_len, self.dims.d_b)
                .next()
                .expect("an unfilled Young diagram always has an addable cell");
            self.place(row);
        }
    }

    /// Moves to the next complete state; false once the subtree is exhausted.
    fn step(&mut self) -> bool {
        match self.phase {
            Phase::Start => {
                self.descend();
                self.phase = Phase::Running;
                true
            }
            Phase::Running => loop {
                let Some(row) = self.unplace() else {
                    self.phase = Phase::Done;
                    return false;
                };
                let next = admissible_rows(&self.row_len, self.dims.d_b).find(|&r| r > row);
                if let Some(r) = next {
                    self.place(r);
                    self.descend();
                    return true;
                }
            },
            Phase::Done => false,
        }
    }

    fn snapshot(&self) -> TableauPrefix {
        TableauPrefix {
            dims: self.dims,
            cells: self.cells.clone(),
            row_len: self.row_len.clone(),
        }
    }
}

/// Iterator over all regular tableaux extending a prefix.
#[derive(Debug, Clone)]
pub struct RegularTableaux {
    walker: Walker,
}

impl RegularTableaux {
    pub fn from_prefix(prefix: TableauPrefix) -> Self {
        let n = prefix.dims.total();
        Self {
            walker: Walker::new(prefix, n),
        }
    }
}

impl Iterator for RegularTableaux {
    type Item = YoungTableau;

    fn next(&mut self) -> Option<YoungTableau> {
        self.walker.step().then(|| {
            YoungTableau::from_cells_unchecked(self.walker.dims, self.walker.cells.clone())
        })
    }
}

/// Streams every regular tableau of the rectangle exactly once.
///
/// With `exploit_symmetry` on a square grid (`d ≥ 2`) only tableaux with `2` at cell
/// `(0, 1)` are produced: exactly half, whose transposes are the other half.
pub fn enumerate_regular(dims: BipartiteDims, exploit_symmetry: bool) -> RegularTableaux {
    RegularTableaux::from_prefix(TableauPrefix::root(dims, exploit_symmetry))
}

/// All partial fillings holding `1..=depth`, in enumeration order. Enumerating each
/// prefix in turn reproduces the [`enumerate_regular`] stream exactly.
pub fn subtree_roots(
    dims: BipartiteDims,
    exploit_symmetry: bool,
    depth: usize,
) -> Vec<TableauPrefix> {
    let root = TableauPrefix::root(dims, exploit_symmetry);
    let depth = depth.clamp(root.placed(), dims.total());
    let mut walker = Walker::new(root, depth);
    let mut out = Vec::new();
    while walker.step() {
        out.push(walker.snapshot());
    }
    out
}
