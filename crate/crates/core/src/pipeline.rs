//! Encoder construction and the compress / reconstruct round trip.
//!
//! The encoder is `U = V_τ · V_D`: `V_D` sends the `α`-th eigenvector (descending
//! eigenvalues) to the computational basis vector with row-major index `α`, and `V_τ`
//! moves that basis vector to the cell of the tableau holding `α + 1`. The encoded state
//! `U σ U†` is then diagonal with the eigenvalues laid out as the tableau dictates.
//!
//! Decoding re-prepares subsystem `A` in `σ^U_A`, the auxiliary state that makes the
//! reconstruction error `S(σ ‖ σ_out)` equal to the mutual information of `U σ U†`.

use std::time::Instant;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{
    apply_unitary, eigendecompose, frobenius_distance, mutual_information, partial_trace,
    random_state_vector, random_unitary, relative_entropy, BipartiteDims, CMatrix, DensityMatrix,
    Spectrum, Subsystem, Unitary, C64,
};
use crate::rng::rng_from_seed;
use crate::search::{optimize, OptimizationResult, SearchConfig};
use crate::tableau::YoungTableau;

#[derive(Debug, Clone, PartialEq)]
pub struct EncoderPlan {
    pub spectrum: Spectrum,
    pub tableau: YoungTableau,
    pub dims: BipartiteDims,
    pub unitary: Unitary,
}

/// `V_D = Σ_α |α⟩⟨φ_α|`: row `α` is the conjugated `α`-th eigenvector.
pub fn disentangling_unitary(spectrum: &Spectrum) -> CMatrix {
    let n = spectrum.len();
    let vectors = spectrum.vectors();
    CMatrix::from_fn(n, n, |alpha, k| vectors[alpha][k].conj())
}

/// `V_τ = Σ_α |cell(α + 1)⟩⟨α|`, a permutation matrix.
pub fn permutation_unitary(tableau: &YoungTableau) -> CMatrix {
    let n = tableau.cells().len();
    let mut m = CMatrix::zeros(n, n);
    for (cell, &v) in tableau.cells().iter().enumerate() {
        m[(cell, v as usize - 1)] = C64::new(1.0, 0.0);
    }
    m
}

/// Builds `U = V_τ · V_D`. The tableau need not be regular; regularity matters only
/// for optimality.
pub fn build_encoder(
    spectrum: &Spectrum,
    tableau: &YoungTableau,
    dims: BipartiteDims,
) -> Result<EncoderPlan> {
    if spectrum.len() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: spectrum.len(),
        });
    }
    if tableau.dims() != dims {
        return Err(Error::InvalidTableau(format!(
            "tableau shape {} does not match {dims}",
            tableau.dims()
        )));
    }
    let u = permutation_unitary(tableau) * disentangling_unitary(spectrum);
    let unitary = Unitary::new(u)?;
    Ok(EncoderPlan {
        spectrum: spectrum.clone(),
        tableau: tableau.clone(),
        dims,
        unitary,
    })
}

/// Intermediate and output states of one compression round trip.
#[derive(Debug, Clone, PartialEq)]
pub struct Compression {
    /// `σ^U = U σ U†`.
    pub encoded: DensityMatrix,
    /// `σ^U_A`, the optimal auxiliary state.
    pub sigma_a: DensityMatrix,
    /// `σ^U_B`, the compressed payload.
    pub sigma_b: DensityMatrix,
    /// `U† (σ^U_A ⊗ σ^U_B) U`.
    pub sigma_out: DensityMatrix,
}

fn check_plan(sigma: &DensityMatrix, plan: &EncoderPlan) -> Result<()> {
    if sigma.dim() != plan.dims.total() {
        return Err(Error::DimensionMismatch {
            expected: plan.dims.total(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

pub fn compress_reconstruct(sigma: &DensityMatrix, plan: &EncoderPlan) -> Result<Compression> {
    check_plan(sigma, plan)?;
    let encoded = apply_unitary(sigma, &plan.unitary)?;
    let sigma_a = partial_trace(&encoded, plan.dims, Subsystem::A)?;
    let sigma_b = partial_trace(&encoded, plan.dims, Subsystem::B)?;
    let sigma_out = decode(&sigma_a, &sigma_b, plan)?;
    Ok(Compression {
        encoded,
        sigma_a,
        sigma_b,
        sigma_out,
    })
}

fn decode(
    rho_a: &DensityMatrix,
    sigma_b: &DensityMatrix,
    plan: &EncoderPlan,
) -> Result<DensityMatrix> {
    apply_unitary(&rho_a.kron(sigma_b), &plan.unitary.adjoint())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionReport {
    /// `S^U(A:B)` of the encoded state, nats.
    #[serde(with = "crate::serde_float")]
    pub mi_middle: f64,
    /// `S(σ ‖ σ_out)`, nats; infinite on a support violation.
    #[serde(with = "crate::serde_float")]
    pub rel_entropy_out: f64,
    /// `|S(σ ‖ σ_out) − S^U(A:B)|`.
    #[serde(with = "crate::serde_float")]
    pub residual: f64,
    /// `‖σ − σ_out‖_F`.
    pub reconstruction_distance: f64,
    pub support_violation: bool,
    pub elapsed_seconds: f64,
}

/// Checks that the reconstruction error with the optimal auxiliary state equals the
/// mutual information of the encoded state.
pub fn verify_theorem1(sigma: &DensityMatrix, plan: &EncoderPlan) -> Result<CompressionReport> {
    let start = Instant::now();
    let c = compress_reconstruct(sigma, plan)?;
    let mi_middle = mutual_information(&c.encoded, plan.dims)?;
    let rel_entropy_out = relative_entropy(sigma, &c.sigma_out)?;
    let support_violation = rel_entropy_out.is_infinite();
    Ok(CompressionReport {
        mi_middle,
        rel_entropy_out,
        residual: (rel_entropy_out - mi_middle).abs(),
        reconstruction_distance: frobenius_distance(sigma.matrix(), c.sigma_out.matrix()),
        support_violation,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// `S(σ ‖ U†(ρ_A ⊗ σ^U_B)U) − S^U(A:B)`; nonnegative, zero iff `ρ_A = σ^U_A`.
pub fn suboptimal_auxiliary_gap(
    sigma: &DensityMatrix,
    plan: &EncoderPlan,
    rho_a: &DensityMatrix,
) -> Result<f64> {
    check_plan(sigma, plan)?;
    if rho_a.dim() != plan.dims.d_a {
        return Err(Error::DimensionMismatch {
            expected: plan.dims.d_a,
            found: rho_a.dim(),
        });
    }
    let encoded = apply_unitary(sigma, &plan.unitary)?;
    let sigma_b = partial_trace(&encoded, plan.dims, Subsystem::B)?;
    let out = decode(rho_a, &sigma_b, plan)?;
    Ok(relative_entropy(sigma, &out)? - mutual_information(&encoded, plan.dims)?)
}

/// Random state families used for experiments and validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    /// Diagonal, flat-simplex populations sorted descending.
    DiagonalMixed,
    /// Diagonal, the sorted flattening of `p ⊗ q` for flat-simplex `p`, `q`.
    ProductSpectrum,
    /// Haar-rotated flat-simplex spectrum.
    RandomDense,
    /// Haar-random pure state.
    Pure,
}

/// Sample from the flat Dirichlet distribution on the `n`-simplex.
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn diagonal(diag: &[f64]) -> DensityMatrix {
    let n = diag.len();
    DensityMatrix::from_trusted(CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(diag[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

pub fn generate_instance(kind: InstanceKind, dims: BipartiteDims, seed: u64) -> DensityMatrix {
    let mut rng = rng_from_seed(seed);
    let n = dims.total();
    match kind {
        InstanceKind::DiagonalMixed => diagonal(&sorted_desc(random_simplex(n, &mut rng))),
        InstanceKind::ProductSpectrum => {
            let p = random_simplex(dims.d_a, &mut rng);
            let q = random_simplex(dims.d_b, &mut rng);
            let joint = p
                .iter()
                .flat_map(|a| q.iter().map(move |b| a * b))
                .collect();
            diagonal(&sorted_desc(joint))
        }
        InstanceKind::RandomDense => {
            let d = diagonal(&random_simplex(n, &mut rng));
            let u = random_unitary(n, &mut rng);
            apply_unitary(&d, &u).expect("dimensions agree")
        }
        InstanceKind::Pure => {
            let psi = random_state_vector(n, &mut rng);
            DensityMatrix::from_pure(&psi).expect("random vector is nonzero")
        }
    }
}

/// Result of optimizing the encoder for a full state.
#[derive(Debug, Clone)]
pub struct StateCompression {
    pub result: OptimizationResult,
    pub plan: EncoderPlan,
    pub report: CompressionReport,
}

/// Eigendecomposes `sigma`, searches for the best tableau, builds the encoder and
/// verifies the round trip.
pub fn compress_state(
    sigma: &DensityMatrix,
    dims: BipartiteDims,
    config: &SearchConfig,
) -> Result<StateCompression> {
    if sigma.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: sigma.dim(),
        });
    }
    let spectrum = eigendecompose(sigma)?;
    let result = optimize(&normalized(spectrum.probs()), dims, config)?;
    let plan = build_encoder(&spectrum, &result.best_tableau, dims)?;
    let report = verify_theorem1(sigma, &plan)?;
    Ok(StateCompression {
        result,
        plan,
        report,
    })
}

/// Rescales eigenvalues so they sum to one exactly in floating point order.
fn normalized(probs: &[f64]) -> Vec<f64> {
    let total: f64 = probs.iter().sum();
    probs.iter().map(|p| p / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{unitarity_deviation, CVector};
    use crate::tableau::random_regular;

    fn dims(a: usize, b: usize) -> BipartiteDims {
        BipartiteDims::new(a, b).unwrap()
    }

    #[test]
    fn diagonal_state_with_row_major_tableau_gives_permutation() {
        let d = dims(2, 2);
        let sigma = DensityMatrix::from_diagonal(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        let spectrum = eigendecompose(&sigma).unwrap();
        let plan = build_encoder(&spectrum, &YoungTableau::row_major(d), d).unwrap();
        for row in plan.unitary.matrix().row_iter() {
            let ones = row
                .iter()
                .filter(|z| (z.norm() - 1.0).abs() < 1e-12)
                .count();
            let zeros = row.iter().filter(|z| z.norm() < 1e-12).count();
            assert_eq!((ones, zeros), (1, 3));
        }
    }

    #[test]
    fn encoder_diagonalizes_dense_state() {
        let d = dims(2, 2);
        let sigma = generate_instance(InstanceKind::RandomDense, d, 5);
        let spectrum = eigendecompose(&sigma).unwrap();
        let plan = build_encoder(&spectrum, &random_regular(d, 1), d).unwrap();
        assert!(unitarity_deviation(plan.unitary.matrix()) < 1e-9);
        let encoded = apply_unitary(&sigma, &plan.unitary).unwrap();
        let m = encoded.matrix();
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(off < 1e-9, "off-diagonal mass {off}");
    }

    #[test]
    fn identity_encoder_on_product_state() {
        let d = dims(2, 2);
        let a = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.6, 0.4]).unwrap();
        let sigma = a.kron(&b);
        let spectrum = eigendecompose(&sigma).unwrap();
        let plan = EncoderPlan {
            spectrum,
            tableau: YoungTableau::row_major(d),
            dims: d,
            unitary: Unitary::identity(4),
        };
        let c = compress_reconstruct(&sigma, &plan).unwrap();
        assert!(frobenius_distance(c.sigma_out.matrix(), sigma.matrix()) < 1e-14);
    }

    #[test]
    fn pure_product_state_round_trip() {
        let d = dims(2, 2);
        let psi = CVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]);
        let sigma = DensityMatrix::from_pure(&psi).unwrap();
        let plan = build_encoder(
            &eigendecompose(&sigma).unwrap(),
            &YoungTableau::row_major(d),
            d,
        )
        .unwrap();
        let r = verify_theorem1(&sigma, &plan).unwrap();
        assert!(r.mi_middle.abs() < 1e-12);
        assert!(r.rel_entropy_out.abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_auxiliary_has_positive_gap() {
        let d = dims(2, 3);
        let sigma = generate_instance(InstanceKind::DiagonalMixed, d, 17);
        let plan = build_encoder(
            &eigendecompose(&sigma).unwrap(),
            &YoungTableau::row_major(d),
            d,
        )
        .unwrap();
        let c = compress_reconstruct(&sigma, &plan).unwrap();
        let optimal = suboptimal_auxiliary_gap(&sigma, &plan, &c.sigma_a).unwrap();
        assert!(optimal.abs() < 1e-7);
        let mixed =
            suboptimal_auxiliary_gap(&sigma, &plan, &DensityMatrix::maximally_mixed(2)).unwrap();
        assert!(mixed > 1e-3, "gap {mixed}");
    }

    #[test]
    fn instances_are_valid_and_deterministic() {
        let d = dims(2, 3);
        for kind in [
            InstanceKind::DiagonalMixed,
            InstanceKind::ProductSpectrum,
            InstanceKind::RandomDense,
            InstanceKind::Pure,
        ] {
            let a = generate_instance(kind, d, 42);
            let b = generate_instance(kind, d, 42);
            assert_eq!(a, b);
            assert!((a.matrix().trace().re - 1.0).abs() < 1e-12);
            assert!(DensityMatrix::from_matrix(a.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn mismatched_plan_is_rejected() {
        let d = dims(2, 2);
        let sigma = generate_instance(InstanceKind::RandomDense, d, 1);
        let plan = build_encoder(
            &eigendecompose(&sigma).unwrap(),
            &YoungTableau::row_major(d),
            d,
        )
        .unwrap();
        let other = generate_instance(InstanceKind::RandomDense, dims(2, 3), 1);
        assert!(matches!(
            compress_reconstruct(&other, &plan),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(build_encoder(
            &eigendecompose(&sigma).unwrap(),
            &YoungTableau::row_major(dims(1, 4)),
            d
        )
        .is_err());
    }
}
