use thiserror::Error;

/// Errors surfaced by state construction, truncation, and quadrature.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A truncated representation would lose more probability mass than the
    /// stated tolerance allows. Raise the cutoff instead of renormalizing.
    #[error("truncation at cutoff {cutoff} loses mass {lost:.3e} (tolerance {tolerance:.1e})")]
    TailMass {
        cutoff: usize,
        lost: f64,
        tolerance: f64,
    },

    /// The superposition `(t a + r a†)|α⟩` is numerically annihilated; no
    /// normalization constant exists.
    #[error("state is not normalizable: |α|² + rt(α²+ᾱ²) + r² = {argument:.3e} ≤ {min:.1e}")]
    DegenerateState { argument: f64, min: f64 },

    /// Parameter validation failure (constraint violations, malformed grids).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A density matrix failed a structural check (shape, hermiticity, trace
    /// window, or positive semidefiniteness).
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    /// The phase-space grid does not resolve the state: its total integral is
    /// too far from 1 for derived quantities to be trusted.
    #[error("grid quadrature inadequate: total integral {total:.8} deviates from 1 by more than {tolerance:.1e}")]
    InadequateGrid { total: f64, tolerance: f64 },

    /// The requested evaluation lies outside the formula's domain of validity.
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    /// A closed form requires the logarithm of a non-positive argument.
    #[error("logarithm argument {argument:.6e} is not positive")]
    NonPositiveLogArgument { argument: f64 },

    /// A covariance determinant fell below the physical uncertainty bound by
    /// more than rounding can explain.
    #[error("covariance determinant {determinant:.6e} is below the uncertainty bound")]
    CovarianceBound { determinant: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
