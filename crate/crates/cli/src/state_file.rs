//! The JSON state file: `{"d_a", "d_b", and exactly one of "matrix" or "spectrum"}`.
//!
//! `matrix` is a list of rows of `[re, im]` pairs. `spectrum` is a probability list; it is
//! renormalized when within `1e-8` of summing to one and rejected otherwise.

use qae_core::qstate::{BipartiteDims, CMatrix, C64};
use qae_core::DensityMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;
const RENORMALIZE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default = "default_version")]
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub d_a: usize,
    pub d_b: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

/// A parsed and validated state.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Dense {
        dims: BipartiteDims,
        state: DensityMatrix,
    },
    Spectrum {
        dims: BipartiteDims,
        probs: Vec<f64>,
    },
}

impl LoadedState {
    pub fn dims(&self) -> BipartiteDims {
        match self {
            LoadedState::Dense { dims, .. } | LoadedState::Spectrum { dims, .. } => *dims,
        }
    }
}

impl StateFile {
    pub fn from_dense(dims: BipartiteDims, state: &DensityMatrix, label: Option<String>) -> Self {
        let m = state.matrix();
        let matrix = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            label,
            d_a: dims.d_a,
            d_b: dims.d_b,
            matrix: Some(matrix),
            spectrum: None,
        }
    }

    pub fn from_spectrum(dims: BipartiteDims, probs: Vec<f64>, label: Option<String>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            label,
            d_a: dims.d_a,
            d_b: dims.d_b,
            matrix: None,
            spectrum: Some(probs),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("malformed state file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state files always serialize")
    }

    /// File-level problems map to usage errors; an invalid density matrix is numerical.
    pub fn load(&self) -> Result<LoadedState, CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        let dims =
            BipartiteDims::new(self.d_a, self.d_b).map_err(|e| CliError::Usage(e.to_string()))?;
        let n = dims.total();
        match (&self.matrix, &self.spectrum) {
            (Some(rows), None) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Usage(format!(
                        "matrix must be {n}x{n} for d_a·d_b = {n}"
                    )));
                }
                let m = CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
                let state = DensityMatrix::from_matrix(m)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                Ok(LoadedState::Dense { dims, state })
            }
            (None, Some(probs)) => {
                if probs.len() != n {
                    return Err(CliError::Usage(format!("spectrum must have {n} entries")));
                }
                if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return Err(CliError::Usage(
                        "spectrum entries must be finite and nonnegative".into(),
                    ));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > RENORMALIZE_TOL {
                    return Err(CliError::Usage(format!(
                        "spectrum sums to {total}, expected 1"
                    )));
                }
                let mut probs: Vec<f64> = probs.iter().map(|p| p / total).collect();
                probs.sort_by(|a, b| b.total_cmp(a));
                Ok(LoadedState::Spectrum { dims, probs })
            }
            _ => Err(CliError::Usage(
                "state file needs exactly one of \"matrix\" or \"spectrum\"".into(),
            )),
        }
    }
}
