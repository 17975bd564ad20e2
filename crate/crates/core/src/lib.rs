//! Single-mode phase-space toolkit for the coherent superposed quantum state
//! (CSQS), the normalized superposition `N (t a + r a†) |α⟩` with `t² + r² = 1`.
//!
//! The crate provides two independent computational routes for every quantity:
//!
//! * closed forms in the state parameters (Wigner function, linear entropy of
//!   the beam-splitter-reduced state, skew-information nonclassicality,
//!   Wigner logarithmic negativity, relative entropy of non-Gaussianity,
//!   photon-loss evolution), and
//! * truncated-Fock-space oracles (ladder operators, 50:50 beam splitter,
//!   partial trace, displaced-parity expectation, amplitude-damping Kraus
//!   channel) that make no use of the closed forms.
//!
//! The oracles are the ground truth; the closed forms are validated against
//! them in the test suite. All types are immutable after construction and are
//! `Send + Sync`, so field evaluation and parameter sweeps parallelize safely.

mod csqs;
mod error;
mod fock;
mod loss;
mod measures;
mod phase_space;

pub mod io;
pub mod tolerances;

pub use csqs::{NormalizedCsqs, StateParams};
pub use error::{Error, Result};
pub use fock::{
    beam_splitter_50_50, choose_cutoff, DensityOperator, FockVector, TwoModeVector,
};
pub use loss::{lossy_field, lossy_wigner_closed, lossy_wigner_oracle, LossParams};
pub use measures::{
    covariance, covariance_oracle, gaussian_entropy_h, linear_entropy_closed,
    linear_entropy_oracle, rel_entropy_from_covariance, rel_entropy_ng, rel_entropy_ng_oracle,
    skew_closed, skew_oracle, CovarianceMatrix, MeasureName, MeasureReport,
};
pub use phase_space::{
    displaced_cutoff, negativity_volume, wigner_closed, wigner_field, wigner_oracle,
    wln_closed_real, wln_from_field, wln_numeric, PhaseGrid, WignerField,
};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
