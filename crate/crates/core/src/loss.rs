//! Photon-loss evolution of the Wigner function: the Gaussian-convolution
//! closed form and the amplitude-damping Kraus oracle it is validated against.

use num_complex::Complex64;

use crate::csqs::NormalizedCsqs;
use crate::error::{Error, Result};
use crate::phase_space::{wigner_closed, wigner_oracle, PhaseGrid, WignerField};
use crate::tolerances::{DEFAULT_EPS_TAIL, GRID_TOLERANCE};

/// The rescaled loss time `κt` together with the loss fraction
/// `T = 1 − e^{−2κt}` (the channel's intensity loss).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossParams {
    kappa_t: f64,
    loss_fraction: f64,
}

impl LossParams {
    pub fn new(kappa_t: f64) -> Result<Self> {
        if !(kappa_t.is_finite() && kappa_t >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "kappa_t must be finite and nonnegative, got {kappa_t}"
            )));
        }
        Ok(Self {
            kappa_t,
            // exp_m1 keeps T accurate at small κt, where 1 − e^{−2κt}
            // would cancel
            loss_fraction: -(-2.0 * kappa_t).exp_m1(),
        })
    }

    pub fn kappa_t(&self) -> f64 {
        self.kappa_t
    }

    /// `T = 1 − e^{−2κt} ∈ [0, 1)`.
    pub fn loss_fraction(&self) -> f64 {
        self.loss_fraction
    }

    /// Amplitude transmissivity `e^{−κt}`.
    pub fn amplitude_transmissivity(&self) -> f64 {
        (-self.kappa_t).exp()
    }
}

/// Wigner function of the state after the loss channel, in closed form:
/// with `u = e^{−κt}` and `η = ζu + Tα`,
///
/// `W(ζ) = (2N²/π)·exp(−2|ζ − αu|²)
///          ·[ t²|α|² + r²(−1 + 2T + |2η − α|²) + 2rt·Re{(2η − α)α} ]`
///
/// The exponent is the fused, cancellation-free form of
/// `(2/T)(|η|² − |ζ|² − T|α|²)`; the two agree identically in `T`, so the
/// fused form is used for every `T` and only `T < 1e−12` (where `η → ζ`
/// makes the bracket itself degenerate to the lossless one) routes to the
/// unevolved Wigner function.
pub fn lossy_wigner_closed(state: &NormalizedCsqs, loss: LossParams, zeta: Complex64) -> f64 {
    let tfrac = loss.loss_fraction();
    if tfrac < 1e-12 {
        return wigner_closed(state, zeta);
    }
    let alpha = state.alpha();
    let t = state.t();
    let r = state.r();
    let u = loss.amplitude_transmissivity();
    let eta = zeta * u + tfrac * alpha;
    let envelope = (-2.0 * (zeta - alpha * u).norm_sqr()).exp();
    let doubled = 2.0 * eta - alpha;
    let bracket = t * t * alpha.norm_sqr()
        + r * r * (2.0 * tfrac - 1.0 + doubled.norm_sqr())
        + 2.0 * r * t * (doubled * alpha).re;
    let n2 = state.n_const() * state.n_const();
    2.0 * n2 * std::f64::consts::FRAC_1_PI * envelope * bracket
}

/// Loss-channel oracle: expand the state, apply the amplitude-damping Kraus
/// channel, and evaluate the displaced-parity trace at `ζ`.
pub fn lossy_wigner_oracle(
    state: &NormalizedCsqs,
    loss: LossParams,
    zeta: Complex64,
    cutoff: usize,
) -> Result<f64> {
    let rho = state.fock(cutoff, DEFAULT_EPS_TAIL)?.density()?;
    let damped = rho.amplitude_damping(loss.kappa_t())?;
    wigner_oracle(&damped, zeta)
}

/// Samples the closed-form lossy Wigner function on `grid` and verifies that
/// the channel preserved normalization within the grid tolerance.
pub fn lossy_field(
    state: &NormalizedCsqs,
    loss: LossParams,
    grid: PhaseGrid,
) -> Result<WignerField> {
    let field = WignerField::from_fn(grid, |zeta| lossy_wigner_closed(state, loss, zeta));
    if (field.total_integral() - 1.0).abs() > GRID_TOLERANCE {
        return Err(Error::InadequateGrid {
            total: field.total_integral(),
            tolerance: GRID_TOLERANCE,
        });
    }
    Ok(field)
}
