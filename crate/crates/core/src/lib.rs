//! Optimal encoders for quantum-autoencoder compression of bipartite mixed states.
//!
//! Compressing `σ_AB` by an encoder `U`, discarding `A` and re-preparing it with the
//! best auxiliary state loses exactly the quantum mutual information `S^U(A:B)` of the
//! encoded state. The optimal encoder factors into a disentangling unitary (eigenbasis to
//! computational basis) followed by a basis permutation, and the permutation can be
//! restricted to those indexed by regular (standard) Young tableaux of the `d_A × d_B`
//! rectangle. This crate provides:
//!
//! * [`qstate`]: density matrices, partial traces, entropies and relative entropy;
//! * [`tableau`]: regular tableau enumeration, counting, sampling and neighborhoods;
//! * [`search`]: exhaustive and breadth/depth-first minimization of mutual information;
//! * [`pipeline`]: encoder construction and the compression/reconstruction round trip.
//!
//! With the default `parallel` feature the batch loops run on rayon; results are
//! bitwise identical to the sequential path.

pub mod error;
mod par;
pub mod pipeline;
pub mod qstate;
pub mod rng;
pub mod search;
pub mod serde_float;
pub mod tableau;

pub use error::{Error, Result};
pub use pipeline::{CompressionReport, EncoderPlan, InstanceKind};
pub use qstate::{
    BipartiteDims, DensityMatrix, EntropyUnit, HermitianMatrix, Spectrum, Subsystem, Unitary,
};

pub use search::{Method, OptimizationResult, SearchConfig, SeedProvenance};
pub use tableau::{Permutation, ProbabilityTableau, YoungTableau};
