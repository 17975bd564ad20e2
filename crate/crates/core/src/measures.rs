//! Scalar nonclassicality and non-Gaussianity measures: the linear entropy
//! potential of one beam-splitter output, the skew-information measure, the
//! quadrature covariance matrix, and the relative entropy of non-Gaussianity.
//! Every measure has a closed form and an independent truncated-Fock oracle.

use num_complex::Complex64;
use serde::Serialize;

use crate::csqs::NormalizedCsqs;
use crate::error::{Error, Result};
use crate::fock::beam_splitter_50_50;
use crate::tolerances::DEFAULT_EPS_TAIL;

/// How far below 1 the covariance determinant may fall before it is treated
/// as evidence of an upstream moment bug rather than rounding.
const COVARIANCE_DET_TOL: f64 = 1e-6;

/// Quadrature covariance matrix in the vacuum-equals-identity convention,
/// for `p = (a+a†)/√2` and `q = (a−a†)/(i√2)`:
/// `σ_pp = 2⟨p²⟩ − 2⟨p⟩²` and likewise for the other entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceMatrix {
    pub s_pp: f64,
    pub s_qq: f64,
    pub s_pq: f64,
}

impl CovarianceMatrix {
    pub fn det(&self) -> f64 {
        self.s_pp * self.s_qq - self.s_pq * self.s_pq
    }
}

/// Which scalar measure a report row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeasureName {
    #[serde(rename = "LE")]
    LinearEntropy,
    #[serde(rename = "N_rho")]
    SkewInformation,
    #[serde(rename = "WLN")]
    WignerLogNegativity,
    #[serde(rename = "delta_NG")]
    RelEntropyNonGaussianity,
}

impl std::fmt::Display for MeasureName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            MeasureName::LinearEntropy => "LE",
            MeasureName::SkewInformation => "N_rho",
            MeasureName::WignerLogNegativity => "WLN",
            MeasureName::RelEntropyNonGaussianity => "delta_NG",
        };
        f.write_str(label)
    }
}

/// One named scalar result, optionally paired with its oracle value and the
/// absolute disagreement between the two routes.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    name: MeasureName,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    method_notes: String,
}

impl MeasureReport {
    pub fn new(
        name: MeasureName,
        closed_value: Option<f64>,
        oracle_value: Option<f64>,
        method_notes: impl Into<String>,
    ) -> Self {
        let delta = match (closed_value, oracle_value) {
            (Some(c), Some(o)) => Some((c - o).abs()),
            _ => None,
        };
        Self {
            name,
            closed_value,
            oracle_value,
            delta,
            method_notes: method_notes.into(),
        }
    }

    pub fn closed_only(name: MeasureName, value: f64, notes: impl Into<String>) -> Self {
        Self::new(name, Some(value), None, notes)
    }

    pub fn with_oracle(
        name: MeasureName,
        closed: f64,
        oracle: f64,
        notes: impl Into<String>,
    ) -> Self {
        Self::new(name, Some(closed), Some(oracle), notes)
    }

    pub fn note_only(name: MeasureName, notes: impl Into<String>) -> Self {
        Self::new(name, None, None, notes)
    }

    pub fn name(&self) -> MeasureName {
        self.name
    }

    pub fn closed_value(&self) -> Option<f64> {
        self.closed_value
    }

    pub fn oracle_value(&self) -> Option<f64> {
        self.oracle_value
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn method_notes(&self) -> &str {
        &self.method_notes
    }
}

/// Linear entropy of one output mode after mixing the state with vacuum on a
/// 50:50 beam splitter, in closed form:
///
/// `LE = 1 − N⁴[ t⁴|α|⁴ + t³r·2|α|²(α²+α*²) + t²r²{2|α|²(1+2|α|²) + α⁴ + α*⁴}
///               + tr³·2(1+|α|²)(α²+α*²) + r⁴(1+4|α|²+2|α|⁴)/2 ]`
///
/// The annihilation-only branch (`r = 0`) is a coherent state, which leaves
/// the beam-splitter output separable; it returns exactly 0.
pub fn linear_entropy_closed(state: &NormalizedCsqs) -> f64 {
    let r = state.r();
    if r == 0.0 {
        return 0.0;
    }
    let t = state.t();
    let alpha = state.alpha();
    let a = alpha.norm_sqr();
    let a2 = alpha * alpha;
    let a2c = a2.conj();
    let bracket = Complex64::from(t.powi(4) * a * a)
        + t.powi(3) * r * 2.0 * a * (a2 + a2c)
        + t * t * r * r * (Complex64::from(2.0 * a * (1.0 + 2.0 * a)) + a2 * a2 + a2c * a2c)
        + t * r.powi(3) * 2.0 * (1.0 + a) * (a2 + a2c)
        + Complex64::from(r.powi(4) * (1.0 + 4.0 * a + 2.0 * a * a) / 2.0);
    debug_assert!(
        bracket.im.abs() < 1e-12 * (1.0 + bracket.re.abs()),
        "conjugate-paired terms must cancel"
    );
    let n2 = state.n_const() * state.n_const();
    1.0 - n2 * n2 * bracket.re
}

/// Linear entropy through the explicit pipeline: expand the state, send it
/// through the beam splitter with vacuum, trace out one mode, and return
/// `1 − Tr ρ²` of what's left.
pub fn linear_entropy_oracle(state: &NormalizedCsqs, cutoff: usize) -> Result<f64> {
    let v = state.fock(cutoff, DEFAULT_EPS_TAIL)?;
    let reduced = beam_splitter_50_50(&v).partial_trace_first()?;
    Ok(1.0 - reduced.purity())
}

/// Skew-information nonclassicality measure for pure states:
/// `N(ρ) = 1/2 + ⟨a†a⟩ − ⟨a†⟩⟨a⟩`, assembled from the closed-form moments.
///
/// The annihilation-only branch is coherent and returns exactly 1/2, the
/// classical floor of the measure.
pub fn skew_closed(state: &NormalizedCsqs) -> f64 {
    if state.r() == 0.0 {
        return 0.5;
    }
    let mean_n = state.moment(1, 1).re;
    let first = (state.moment(1, 0) * state.moment(0, 1)).re;
    0.5 + mean_n - first
}

/// Skew measure from ladder-oracle moments on the expanded state.
pub fn skew_oracle(state: &NormalizedCsqs, cutoff: usize) -> Result<f64> {
    let v = state.fock(cutoff, DEFAULT_EPS_TAIL)?;
    let mean_n = v.moment(1, 1, DEFAULT_EPS_TAIL)?.re;
    let first = (v.moment(1, 0, DEFAULT_EPS_TAIL)? * v.moment(0, 1, DEFAULT_EPS_TAIL)?).re;
    Ok(0.5 + mean_n - first)
}

fn covariance_from_moments(e_a: Complex64, e_a2: Complex64, mean_n: f64) -> CovarianceMatrix {
    CovarianceMatrix {
        s_pp: 2.0 * e_a2.re + 2.0 * mean_n + 1.0 - 4.0 * e_a.re * e_a.re,
        s_qq: -2.0 * e_a2.re + 2.0 * mean_n + 1.0 - 4.0 * e_a.im * e_a.im,
        s_pq: 2.0 * e_a2.im - 4.0 * e_a.re * e_a.im,
    }
}

/// Quadrature covariance matrix from the closed-form moments. Both diagonal
/// entries are computed independently (they differ whenever `⟨a²⟩` has a real
/// part the displacement doesn't account for).
///
/// At `r = 0` the state is a coherent state, whose vacuum-normalized
/// covariance is the identity by definition; that reduction is returned
/// exactly rather than through the rounded moment arithmetic.
pub fn covariance(state: &NormalizedCsqs) -> CovarianceMatrix {
    if state.r() == 0.0 {
        return CovarianceMatrix {
            s_pp: 1.0,
            s_qq: 1.0,
            s_pq: 0.0,
        };
    }
    covariance_from_moments(
        state.moment(0, 1),
        state.moment(0, 2),
        state.moment(1, 1).re,
    )
}

/// Covariance matrix from ladder-oracle moments.
pub fn covariance_oracle(state: &NormalizedCsqs, cutoff: usize) -> Result<CovarianceMatrix> {
    let v = state.fock(cutoff, DEFAULT_EPS_TAIL)?;
    Ok(covariance_from_moments(
        v.moment(0, 1, DEFAULT_EPS_TAIL)?,
        v.moment(0, 2, DEFAULT_EPS_TAIL)?,
        v.moment(1, 1, DEFAULT_EPS_TAIL)?.re,
    ))
}

/// `h(x) = ((x+1)/2)log₂((x+1)/2) − ((x−1)/2)log₂((x−1)/2)`, the von Neumann
/// entropy of a Gaussian state whose covariance has symplectic eigenvalue `x`,
/// extended by continuity with `h(x) = 0` for `x ≤ 1`.
pub fn gaussian_entropy_h(x: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    let hi = 0.5 * (x + 1.0);
    let lo = 0.5 * (x - 1.0);
    hi * hi.log2() - lo * lo.log2()
}

/// Relative entropy of non-Gaussianity from a covariance matrix:
/// `δ = h(√det σ)`, since the reference Gaussian state shares the first and
/// second moments and a pure state contributes no entropy of its own.
///
/// A determinant materially below 1 violates the uncertainty bound for these
/// states and is rejected as an upstream moment bug; sub-1 rounding dust is
/// clamped before `h`.
pub fn rel_entropy_from_covariance(cov: &CovarianceMatrix) -> Result<f64> {
    let det = cov.det();
    if det < 1.0 - COVARIANCE_DET_TOL {
        return Err(Error::CovarianceBound { determinant: det });
    }
    Ok(gaussian_entropy_h(det.sqrt().max(1.0)))
}

/// Relative entropy of non-Gaussianity via the closed-form covariance.
pub fn rel_entropy_ng(state: &NormalizedCsqs) -> Result<f64> {
    rel_entropy_from_covariance(&covariance(state))
}

/// Relative entropy of non-Gaussianity via the oracle covariance.
pub fn rel_entropy_ng_oracle(state: &NormalizedCsqs, cutoff: usize) -> Result<f64> {
    rel_entropy_from_covariance(&covariance_oracle(state, cutoff)?)
}
