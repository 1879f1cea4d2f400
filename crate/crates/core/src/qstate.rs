//! Dense bipartite quantum states: validation, spectra, partial traces and entropies.
//!
//! Basis ordering follows the tensor product `A ⊗ B`: the computational basis vector
//! `|i m⟩` sits at index `i * d_B + m`. All entropies are returned in nats; use
//! [`EntropyUnit`] to convert for reporting.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Maximum entrywise asymmetry accepted for a Hermitian matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace and eigenvalue slack accepted for a density matrix.
pub const STATE_TOL: f64 = 1e-10;
/// Maximum entrywise deviation of `U U†` from the identity.
pub const UNITARY_TOL: f64 = 1e-10;
/// `σ` eigenvalues below this are treated as outside its support.
pub const SUPPORT_TOL: f64 = 1e-12;
/// `ρ` weight on a null direction of `σ` above this makes the relative entropy infinite.
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteDims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidConfig(format!(
                "subsystem dimensions must be positive, got ({d_a}, {d_b})"
            )));
        }
        Ok(Self { d_a, d_b })
    }

    /// Dimension of the joint space, `d_A · d_B`.
    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn transposed(&self) -> Self {
        Self {
            d_a: self.d_b,
            d_b: self.d_a,
        }
    }

    pub fn is_square(&self) -> bool {
        self.d_a == self.d_b
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.total() != dim {
            return Err(Error::DimensionMismatch {
                expected: self.total(),
                found: dim,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.d_a, self.d_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Reporting unit for entropies. Library functions always work in nats.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyUnit {
    #[default]
    Nats,
    Bits,
}

impl EntropyUnit {
    pub fn from_nats(self, value: f64) -> f64 {
        match self {
            EntropyUnit::Nats => value,
            EntropyUnit::Bits => value / std::f64::consts::LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EntropyUnit::Nats => "nats",
            EntropyUnit::Bits => "bits",
        }
    }
}

/// A square complex matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let asymmetry = max_asymmetry(&matrix);
        if asymmetry > HERMITIAN_TOL {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self(matrix))
    }

    /// Projects `matrix` onto its Hermitian part without validation; used for results of
    /// operations that are Hermitian in exact arithmetic.
    pub(crate) fn hermitize(matrix: CMatrix) -> Self {
        let adj = matrix.adjoint();
        Self((matrix + adj).scale(0.5))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Eigenvalues in non-increasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.0.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        vals
    }
}

fn max_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// A positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.0.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min_eig = matrix.eigenvalues().last().copied().unwrap_or(0.0);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (smallest eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self(matrix))
    }

    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(matrix)?)
    }

    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self(HermitianMatrix::hermitize(matrix))
    }

    /// Diagonal state with the given populations.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::from_matrix(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// Projector onto the normalized `psi`.
    pub fn from_pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(Self::from_trusted(&v * v.adjoint()))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(CMatrix::identity(dim, dim).unscale(dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.matrix()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues()
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_trusted(self.matrix().kronecker(other.matrix()))
    }
}

/// Eigen-decomposition `ρ = Σ_α p_α |φ_α⟩⟨φ_α|` with `p` non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    probs: Vec<f64>,
    vectors: Vec<CVector>,
}

impl Spectrum {
    pub fn new(probs: Vec<f64>, vectors: Vec<CVector>) -> Result<Self> {
        if probs.len() != vectors.len() {
            return Err(Error::DimensionMismatch {
                expected: probs.len(),
                found: vectors.len(),
            });
        }
        if probs.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDistribution(
                "probabilities are not sorted descending".into(),
            ));
        }
        if probs
            .iter()
            .any(|&p| !(-STATE_TOL..=1.0 + STATE_TOL).contains(&p))
        {
            return Err(Error::InvalidDistribution(
                "probability outside [0, 1]".into(),
            ));
        }
        let n = probs.len();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let mut deviation = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let dot = vectors[a].dotc(&vectors[b]);
                let target = if a == b { 1.0 } else { 0.0 };
                deviation = deviation.max((dot - C64::new(target, 0.0)).norm());
            }
        }
        if deviation > STATE_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { probs, vectors })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `Σ_α p_α |φ_α⟩⟨φ_α|`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.len();
        let mut out = CMatrix::zeros(n, n);
        for (p, v) in self.probs.iter().zip(&self.vectors) {
            out += (v * v.adjoint()).scale(*p);
        }
        out
    }
}

/// A square matrix with `U U† = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(CMatrix);

impl Unitary {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(matrix))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary(self.0.adjoint())
    }
}

/// Largest entry of `|U U† − I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let product = u * u.adjoint();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((product[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Shannon entropy in nats with `0 · log 0 = 0`; entries in `[-1e-10, 0)` count as zero.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

fn clamp_noise(p: f64) -> f64 {
    if (-STATE_TOL..0.0).contains(&p) {
        0.0
    } else {
        p
    }
}

/// Descending eigen-decomposition. Ties keep the eigensolver's output order.
pub fn eigendecompose(rho: &DensityMatrix) -> Result<Spectrum> {
    let eig = rho.matrix().clone().symmetric_eigen();
    let n = rho.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let probs = order
        .iter()
        .map(|&k| clamp_noise(eig.eigenvalues[k]))
        .collect();
    let vectors = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).into_owned())
        .collect();
    Spectrum::new(probs, vectors)
}

/// `−Tr ρ log ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let eigs: Vec<f64> = rho.eigenvalues().into_iter().map(clamp_noise).collect();
    shannon_entropy(&eigs)
}

pub fn partial_trace(
    rho: &DensityMatrix,
    dims: BipartiteDims,
    keep: Subsystem,
) -> Result<DensityMatrix> {
    dims.check(rho.dim())?;
    let m = rho.matrix();
    let (d_a, d_b) = (dims.d_a, dims.d_b);
    let reduced = match keep {
        Subsystem::A => CMatrix::from_fn(d_a, d_a, |i, j| {
            (0..d_b).map(|k| m[(i * d_b + k, j * d_b + k)]).sum()
        }),
        Subsystem::B => CMatrix::from_fn(d_b, d_b, |i, j| {
            (0..d_a).map(|k| m[(k * d_b + i, k * d_b + j)]).sum()
        }),
    };
    Ok(DensityMatrix::from_trusted(reduced))
}

/// `S(ρ‖σ) = Tr ρ log ρ − Tr ρ log σ` in nats, or `f64::INFINITY` when the support of `ρ`
/// is not contained in the support of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let neg_entropy = -von_neumann_entropy(rho);
    let eig = sigma.matrix().clone().symmetric_eigen();
    let mut cross = 0.0;
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        let s = eig.eigenvectors.column(k);
        // ⟨s|ρ|s⟩ is the weight ρ puts on this eigendirection of σ.
        let weight = s.dotc(&(rho.matrix() * s)).re;
        if mu < SUPPORT_TOL {
            if weight > SUPPORT_WEIGHT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * mu.ln();
    }
    Ok(neg_entropy - cross)
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)` in nats. Tiny negative round-off is not clamped.
pub fn mutual_information(rho: &DensityMatrix, dims: BipartiteDims) -> Result<f64> {
    let rho_a = partial_trace(rho, dims, Subsystem::A)?;
    let rho_b = partial_trace(rho, dims, Subsystem::B)?;
    Ok(von_neumann_entropy(&rho_a) + von_neumann_entropy(&rho_b) - von_neumann_entropy(rho))
}

/// `U ρ U†`.
pub fn apply_unitary(rho: &DensityMatrix, u: &Unitary) -> Result<DensityMatrix> {
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: u.dim(),
        });
    }
    let m = u.matrix() * rho.matrix() * u.matrix().adjoint();
    Ok(DensityMatrix::from_trusted(m))
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the phase fix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Unitary {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    Unitary(q)
}

/// Haar-random unit vector.
pub fn random_state_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v.unscale(norm)
}
