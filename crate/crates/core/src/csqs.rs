//! The coherent superposed quantum state `N(t·a + r·a†)|α⟩` with `t² + r² = 1`:
//! parameter validation, the normalization constant, number-basis expansion,
//! and closed-form normally ordered moments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{choose_cutoff, FockVector};
use crate::tolerances::{DEFAULT_EPS_TAIL, MIN_NORMALIZATION};

/// Tolerance on the unit-circle constraint `t² + r² = 1`.
const CIRCLE_TOL: f64 = 1e-12;

/// The raw parameter triple `(α, t, r)` of the superposed state.
///
/// Both weights may be negative; only the unit-circle constraint is enforced.
/// Degeneracy (a normalization argument near zero) is checked later, by
/// [`NormalizedCsqs::new`], so that parameter parsing and state validity stay
/// separable concerns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateParams {
    alpha: Complex64,
    t: f64,
    r: f64,
}

impl StateParams {
    /// Validates an explicit `(α, t, r)` triple against `t² + r² = 1`.
    pub fn new(alpha: Complex64, t: f64, r: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite() && t.is_finite() && r.is_finite()) {
            return Err(Error::InvalidParams(
                "state parameters must be finite".into(),
            ));
        }
        let circle = t * t + r * r;
        if (circle - 1.0).abs() > CIRCLE_TOL {
            return Err(Error::InvalidParams(format!(
                "t² + r² = {circle:.15} violates the unit-circle constraint"
            )));
        }
        Ok(Self { alpha, t, r })
    }

    /// Builds from `t`, deriving `r = +√(1−t²)`.
    pub fn from_t(alpha: Complex64, t: f64) -> Result<Self> {
        if !t.is_finite() || t.abs() > 1.0 {
            return Err(Error::InvalidParams(format!(
                "t must lie in [-1, 1], got {t}"
            )));
        }
        let r = (1.0 - t * t).max(0.0).sqrt();
        Self::new(alpha, t, r)
    }

    /// Builds from `r`, deriving the nonnegative branch `t = +√(1−r²)`.
    pub fn from_r(alpha: Complex64, r: f64) -> Result<Self> {
        let t = Self::t_for(r)?;
        Self::new(alpha, t, r)
    }

    /// Builds from `r` with the other branch, `t = −√(1−r²)`.
    pub fn from_r_negative_t(alpha: Complex64, r: f64) -> Result<Self> {
        let t = Self::t_for(r)?;
        Self::new(alpha, -t, r)
    }

    fn t_for(r: f64) -> Result<f64> {
        if !r.is_finite() || r.abs() > 1.0 {
            return Err(Error::InvalidParams(format!(
                "r must lie in [-1, 1], got {r}"
            )));
        }
        Ok((1.0 - r * r).max(0.0).sqrt())
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The normalization argument `|α|² + rt(α² + α*²) + r²`; the state is
    /// normalizable iff this is positive (it vanishes exactly when
    /// `(t·a + r·a†)|α⟩` is the zero vector, e.g. at `r = 0, α = 0`).
    pub fn norm_argument(&self) -> f64 {
        let a = self.alpha.norm_sqr();
        a + 2.0 * self.r * self.t * (self.alpha * self.alpha).re + self.r * self.r
    }
}

/// A validated, normalizable superposed state together with its normalization
/// constant `N = (|α|² + rt(α²+α*²) + r²)^{−1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedCsqs {
    params: StateParams,
    n_const: f64,
}

impl NormalizedCsqs {
    /// Normalizes with the default degeneracy threshold.
    pub fn new(params: StateParams) -> Result<Self> {
        Self::with_min_norm(params, MIN_NORMALIZATION)
    }

    /// Normalizes, rejecting states whose normalization argument is at or
    /// below `min_argument` (numerically annihilated superpositions).
    pub fn with_min_norm(params: StateParams, min_argument: f64) -> Result<Self> {
        let argument = params.norm_argument();
        if argument <= min_argument {
            return Err(Error::DegenerateState {
                argument,
                min: min_argument,
            });
        }
        Ok(Self {
            params,
            n_const: argument.sqrt().recip(),
        })
    }

    pub fn params(&self) -> &StateParams {
        &self.params
    }

    pub fn alpha(&self) -> Complex64 {
        self.params.alpha
    }

    pub fn t(&self) -> f64 {
        self.params.t
    }

    pub fn r(&self) -> f64 {
        self.params.r
    }

    /// The normalization constant `N`.
    pub fn n_const(&self) -> f64 {
        self.n_const
    }

    /// A cutoff adequate for expanding this state and evaluating normally
    /// ordered moments of total order up to `extra_excitations` on it.
    ///
    /// Two levels of headroom and a hundredfold-tighter tail budget are added
    /// beyond the caller's request: the normalization constant amplifies
    /// truncation error, and this margin keeps the expanded state's norm
    /// deficiency inside `DEFAULT_EPS_TAIL` across the whole parameter domain.
    /// (Moment evaluation annihilates before it creates, so the top levels it
    /// walks through are empty; a long chain of bare creation operators
    /// instead amplifies edge mass by ~cutoff per step and would need a far
    /// larger margin.)
    pub fn default_cutoff(&self, extra_excitations: usize) -> usize {
        choose_cutoff(
            self.params.alpha,
            extra_excitations + 2,
            DEFAULT_EPS_TAIL * 1e-2,
        )
    }

    /// Number-basis expansion: applies `t·a + r·a†` to the truncated coherent
    /// vector and scales by `N`, giving amplitudes
    /// `c_n = N(tα·A_n + r√n·A_{n−1})` with `A_n` the coherent amplitudes.
    ///
    /// Errors if the cutoff cannot hold the state to within `eps_tail`.
    pub fn fock(&self, cutoff: usize, eps_tail: f64) -> Result<FockVector> {
        let base = FockVector::coherent(self.params.alpha, cutoff, eps_tail)?;
        let lowered = base.annihilate().scaled(Complex64::from(self.params.t));
        let raised = base.create(eps_tail)?.scaled(Complex64::from(self.params.r));
        let v = lowered.add(&raised).scaled(Complex64::from(self.n_const));
        let deficiency = 1.0 - v.norm_sqr();
        if deficiency > eps_tail {
            return Err(Error::TailMass {
                cutoff,
                lost: deficiency,
                tolerance: eps_tail,
            });
        }
        Ok(v)
    }

    /// Normally ordered moment `⟨a†^m a^n⟩` of the state, in closed form:
    ///
    /// `N² α*^{m−1} α^{n−1} [|α|⁴ + rt{(m+|α|²)α² + (n+|α|²)α*²}
    ///                        + r²{mn + (m+n+1)|α|²}]`
    ///
    /// `(0,0)` returns exactly 1 (normalization is definitional), and `α = 0`
    /// is evaluated on the ladder oracle (the written prefactor degenerates
    /// there; the state is exactly `|1⟩` and the tiny-cutoff oracle is exact).
    pub fn moment(&self, m: usize, n: usize) -> Complex64 {
        if m == 0 && n == 0 {
            return Complex64::ONE;
        }
        let alpha = self.params.alpha;
        if alpha == Complex64::ZERO {
            let cutoff = m + n + 2;
            return self
                .fock(cutoff, DEFAULT_EPS_TAIL)
                .and_then(|v| v.moment(m, n, DEFAULT_EPS_TAIL))
                .expect("ladder moment of r·a†|0⟩ is exact at cutoff m+n+2");
        }
        let t = self.params.t;
        let r = self.params.r;
        let a = alpha.norm_sqr();
        let alpha_sq = alpha * alpha;
        let bracket = Complex64::from(a * a)
            + r * t * ((m as f64 + a) * alpha_sq + (n as f64 + a) * alpha_sq.conj())
            + Complex64::from(r * r * ((m * n) as f64 + (m + n + 1) as f64 * a));
        let prefactor = alpha.conj().powi(m as i32 - 1) * alpha.powi(n as i32 - 1);
        self.n_const * self.n_const * prefactor * bracket
    }
}
