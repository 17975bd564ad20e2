//! Numerical tolerances shared across the crate.
//!
//! Every bound here is a default for a constructor or validation check, not a
//! fitting knob: loosening one to make a comparison pass defeats the point of
//! the dual-route (closed form vs oracle) design.

/// Maximum probability mass a truncated Fock representation may lose.
///
/// `choose_cutoff` sizes truncations so the Poisson tail beyond the cutoff is
/// below this; analytic constructors reject representations that lose more.
pub const DEFAULT_EPS_TAIL: f64 = 1e-12;

/// Lower bound applied to density-operator eigenvalues.
///
/// Partial traces and Kraus sums are positive semidefinite in exact
/// arithmetic; eigenvalues below `-EPS_PSD` indicate real corruption rather
/// than rounding.
pub const EPS_PSD: f64 = 1e-10;

/// Smallest normalization argument `|α|² + rt(α² + ᾱ²) + r²` accepted when
/// constructing a state. Below this the superposition is numerically
/// annihilated and no normalization constant exists.
pub const MIN_NORMALIZATION: f64 = 1e-10;

/// Maximum deviation of a Wigner field's total integral from 1 before
/// log-negativity refuses to trust the quadrature.
pub const GRID_TOLERANCE: f64 = 1e-3;

/// Largest imaginary residue tolerated when a trace or closed-form bracket is
/// real by symmetry and the imaginary part is pure rounding noise.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;
