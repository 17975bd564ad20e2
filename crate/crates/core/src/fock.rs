//! Truncated Fock-space machinery: ladder operators, the 50:50 beam splitter,
//! partial traces, and the amplitude-damping channel.
//!
//! Everything here is deliberately independent of the closed forms in the rest
//! of the crate; these routines are the oracles the closed forms are tested
//! against. Truncation is explicit: constructors check how much probability
//! mass a cutoff loses and refuse to renormalize it away.

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::{DEFAULT_EPS_TAIL, EPS_PSD};

/// Smallest Fock cutoff `D` (basis `|0⟩..|D⟩`) such that a coherent state with
/// amplitude `alpha` keeps all but `eps_tail` of its mass below `D`, plus
/// `extra_excitations` levels of headroom for subsequent ladder applications.
///
/// The photon-number distribution of `|α⟩` is Poisson with mean `|α|²`; the
/// tail is summed directly with the incremental recurrence `p_n = p_{n-1} λ/n`.
pub fn choose_cutoff(alpha: Complex64, extra_excitations: usize, eps_tail: f64) -> usize {
    let lambda = alpha.norm_sqr();
    let mut d = 0usize;
    if lambda > 0.0 {
        let mut p = (-lambda).exp();
        let mut cumulative = p;
        // eps_tail below ~1e-15 is not resolvable in f64; the hard cap keeps
        // the loop finite if a caller asks for one anyway.
        while 1.0 - cumulative > eps_tail && d < 4096 {
            d += 1;
            p *= lambda / d as f64;
            cumulative += p;
        }
    }
    (d + extra_excitations).max(1)
}

/// A pure single-mode state on the truncated basis `|0⟩..|cutoff⟩`.
///
/// Analytic constructors (`coherent`, the CSQS builder) guarantee a squared
/// norm within `eps_tail` of 1; ladder outputs are intentionally unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    /// Wraps raw amplitudes; no normalization check is applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(!amps.is_empty(), "a Fock vector needs at least |0⟩");
        Self { amps }
    }

    /// The coherent state `|α⟩` with amplitudes `e^{-|α|²/2} αⁿ/√(n!)`,
    /// computed by the incremental recurrence `c_n = c_{n-1} α/√n`.
    ///
    /// Fails if the cutoff loses more than `eps_tail` of the state's mass.
    pub fn coherent(alpha: Complex64, cutoff: usize, eps_tail: f64) -> Result<Self> {
        let mut amps = Vec::with_capacity(cutoff + 1);
        let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        amps.push(c);
        for n in 1..=cutoff {
            c *= alpha / (n as f64).sqrt();
            amps.push(c);
        }
        let v = Self { amps };
        let lost = (1.0 - v.norm_sqr()).max(0.0);
        if lost > eps_tail {
            return Err(Error::TailMass {
                cutoff,
                lost,
                tolerance: eps_tail,
            });
        }
        Ok(v)
    }

    /// Basis state `|n⟩` on `|0⟩..|cutoff⟩`.
    pub fn basis(n: usize, cutoff: usize) -> Self {
        assert!(n <= cutoff, "basis index beyond cutoff");
        let mut amps = vec![Complex64::ZERO; cutoff + 1];
        amps[n] = Complex64::ONE;
        Self { amps }
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.amps.len(), other.amps.len(), "cutoff mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies the annihilation operator: `out_n = √(n+1) · v_{n+1}`.
    ///
    /// The result is unnormalized; the top component is dropped, which is
    /// exact for vectors supported below the cutoff.
    pub fn annihilate(&self) -> Self {
        let d = self.cutoff();
        let mut amps = vec![Complex64::ZERO; d + 1];
        for n in 0..d {
            amps[n] = ((n + 1) as f64).sqrt() * self.amps[n + 1];
        }
        Self { amps }
    }

    /// Applies the creation operator: `out_{n+1} = √(n+1) · v_n`.
    ///
    /// The component pushed past the cutoff is dropped, so the input must have
    /// headroom: more than `eps_tail` of squared amplitude at the top level is
    /// rejected as a tail-mass error.
    pub fn create(&self, eps_tail: f64) -> Result<Self> {
        let d = self.cutoff();
        let top = self.amps[d].norm_sqr();
        if top > eps_tail {
            return Err(Error::TailMass {
                cutoff: d,
                lost: (d + 1) as f64 * top,
                tolerance: eps_tail,
            });
        }
        let mut amps = vec![Complex64::ZERO; d + 1];
        for n in 0..d {
            amps[n + 1] = ((n + 1) as f64).sqrt() * self.amps[n];
        }
        Ok(Self { amps })
    }

    /// Normally ordered moment `⟨a†^m a^n⟩` by repeated ladder application and
    /// an inner product: `⟨self| a†^m (a^n |self⟩)`.
    ///
    /// The `m` creation steps each require headroom; choose the cutoff with
    /// `choose_cutoff(α, m + n + 2, eps_tail)` or larger.
    pub fn moment(&self, m: usize, n: usize, eps_tail: f64) -> Result<Complex64> {
        let mut w = self.clone();
        for _ in 0..n {
            w = w.annihilate();
        }
        for _ in 0..m {
            w = w.create(eps_tail)?;
        }
        Ok(self.inner(&w))
    }

    /// The projector `|ψ⟩⟨ψ|` as a density operator.
    pub fn density(&self) -> Result<DensityOperator> {
        let d = self.amps.len();
        let mut mat = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let v = self.amps[i] * self.amps[j].conj();
                mat[(i, j)] = v;
                mat[(j, i)] = v.conj();
            }
        }
        DensityOperator::new(mat)
    }

    pub(crate) fn scaled(&self, s: Complex64) -> Self {
        Self {
            amps: self.amps.iter().map(|c| c * s).collect(),
        }
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        assert_eq!(self.amps.len(), other.amps.len(), "cutoff mismatch");
        Self {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// A pure two-mode state with both modes truncated at the same cutoff.
/// Amplitude `(j, k)` multiplies `|j⟩_A |k⟩_B`.
#[derive(Debug, Clone)]
pub struct TwoModeVector {
    amps: DMatrix<Complex64>,
}

impl TwoModeVector {
    pub fn cutoff(&self) -> usize {
        self.amps.nrows() - 1
    }

    pub fn amplitude(&self, j: usize, k: usize) -> Complex64 {
        self.amps[(j, k)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Swaps the two modes (transposition of the amplitude matrix).
    pub fn swap_modes(&self) -> Self {
        Self {
            amps: self.amps.transpose(),
        }
    }

    /// Traces out the first mode: `(ρ_B)_{kl} = Σ_j w_{jk} · conj(w_{jl})`.
    pub fn partial_trace_first(&self) -> Result<DensityOperator> {
        let d = self.amps.nrows();
        let mut mat = DMatrix::zeros(d, d);
        for k in 0..d {
            for l in k..d {
                let mut s = Complex64::ZERO;
                for j in 0..d {
                    s += self.amps[(j, k)] * self.amps[(j, l)].conj();
                }
                mat[(k, l)] = s;
                mat[(l, k)] = s.conj();
            }
        }
        DensityOperator::new(mat)
    }
}

/// Sends `|n⟩_A |0⟩_B` through a lossless 50:50 beam splitter:
/// `|n,0⟩ → 2^{-n/2} Σ_j √(C(n,j)) |j, n-j⟩`, extended by linearity.
///
/// The coefficient `q_j = 2^{-n/2} √(C(n,j))` is built incrementally along
/// each anti-diagonal (`q_{j+1} = q_j √((n-j)/(j+1))`) so no factorial is ever
/// formed; this keeps the map unitary to machine precision.
pub fn beam_splitter_50_50(input: &FockVector) -> TwoModeVector {
    let d = input.cutoff();
    let mut amps = DMatrix::zeros(d + 1, d + 1);
    let half_sqrt = std::f64::consts::FRAC_1_SQRT_2;
    for n in 0..=d {
        let v = input.amplitude(n);
        if v == Complex64::ZERO {
            continue;
        }
        let mut q = half_sqrt.powi(n as i32);
        for j in 0..=n {
            amps[(j, n - j)] += v * q;
            if j < n {
                q *= ((n - j) as f64 / (j + 1) as f64).sqrt();
            }
        }
    }
    TwoModeVector { amps }
}

/// A single-mode density operator on the truncated basis.
///
/// Construction verifies hermiticity (exact, since all internal builders
/// mirror the upper triangle), a unit-trace window, and positive
/// semidefiniteness down to `-EPS_PSD`.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    mat: DMatrix<Complex64>,
}

impl DensityOperator {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::InvalidDensity(format!(
                "expected a nonempty square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let d = mat.nrows();
        for i in 0..d {
            for j in i..d {
                if mat[(i, j)] != mat[(j, i)].conj() {
                    return Err(Error::InvalidDensity(format!(
                        "not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        let trace: f64 = (0..d).map(|i| mat[(i, i)].re).sum();
        // The lower edge of the window is the truncation budget; the sliver
        // above 1 only absorbs accumulated rounding.
        if !(1.0 - DEFAULT_EPS_TAIL..=1.0 + 1e-12).contains(&trace) {
            return Err(Error::InvalidDensity(format!(
                "trace {trace:.15} outside the unit window"
            )));
        }
        let min_eig = min_hermitian_eigenvalue(&mat);
        if min_eig < -EPS_PSD {
            return Err(Error::InvalidDensity(format!(
                "eigenvalue {min_eig:.3e} below -{EPS_PSD:.1e}"
            )));
        }
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// `Tr ρ² = Σ |ρ_{mn}|²` for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Evolves through the amplitude-damping (photon-loss) channel with
    /// intensity transmissivity `e^{-2 κt}`, via the Kraus sum
    /// `ρ' = Σ_k K_k ρ K_k†` with
    /// `K_k = Σ_n √(C(n,k) η^{n-k} (1-η)^k) |n-k⟩⟨n|`.
    ///
    /// Each Kraus term is a scaled, shifted submatrix, so the sum is assembled
    /// entrywise without forming operator products. Coherent states map to
    /// coherent states with amplitude `α e^{-κt}`; `κt = 0` is the identity.
    pub fn amplitude_damping(&self, kappa_t: f64) -> Result<DensityOperator> {
        if !(kappa_t.is_finite() && kappa_t >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "kappa_t must be finite and nonnegative, got {kappa_t}"
            )));
        }
        let eta = (-2.0 * kappa_t).exp();
        let loss = -(-2.0 * kappa_t).exp_m1();
        if loss == 0.0 {
            return Ok(self.clone());
        }
        let d = self.dim();
        let sqrt_loss = loss.sqrt();
        let mut out: DMatrix<Complex64> = DMatrix::zeros(d, d);
        let mut coef = vec![0.0f64; d];
        for k in 0..d {
            // coef[n] = √(C(n,k) η^{n-k} loss^k), built along n by the ratio
            // C(n,k)/C(n-1,k) = n/(n-k).
            coef[k] = sqrt_loss.powi(k as i32);
            for n in k + 1..d {
                coef[n] = coef[n - 1] * (eta * n as f64 / (n - k) as f64).sqrt();
            }
            for i in 0..d - k {
                for j in i..d - k {
                    out[(i, j)] += coef[i + k] * coef[j + k] * self.mat[(i + k, j + k)];
                }
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                out[(j, i)] = out[(i, j)].conj();
            }
        }
        DensityOperator::new(out)
    }
}

/// Minimum eigenvalue of a Hermitian matrix `H = A + iB`, computed through the
/// real symmetric embedding `[[A, -B], [B, A]]` (same spectrum, doubled
/// multiplicity), which avoids any complex eigensolver.
fn min_hermitian_eigenvalue(mat: &DMatrix<Complex64>) -> f64 {
    let d = mat.nrows();
    let mut real = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z: Complex<f64> = mat[(i, j)];
            real[(i, j)] = z.re;
            real[(i + d, j + d)] = z.re;
            real[(i, j + d)] = -z.im;
            real[(i + d, j)] = z.im;
        }
    }
    real.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Natural-log factorials `ln(0!)..ln(n!)` by cumulative summation; adequate
/// for the displacement-matrix prefactors, which tolerate ~1e-12 relative
/// error against the 1e-8 oracle comparisons.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut lf = Vec::with_capacity(n + 1);
    lf.push(0.0);
    let mut acc = 0.0;
    for k in 1..=n {
        acc += (k as f64).ln();
        lf.push(acc);
    }
    lf
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Poisson tail mass beyond `d`, summed directly; the independent check
    /// for `choose_cutoff` and coherent-state truncation.
    fn poisson_tail(lambda: f64, d: usize) -> f64 {
        let mut p = (-lambda).exp();
        let mut cum = p;
        for n in 1..=d {
            p *= lambda / n as f64;
            cum += p;
        }
        (1.0 - cum).max(0.0)
    }

    fn random_state(rng: &mut StdRng, cutoff: usize, headroom: usize) -> FockVector {
        let mut amps = vec![Complex64::ZERO; cutoff + 1];
        for a in amps.iter_mut().take(cutoff + 1 - headroom) {
            *a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        FockVector::from_amplitudes(amps.iter().map(|z| z / norm).collect())
    }

    #[test]
    fn choose_cutoff_bounds_the_poisson_tail() {
        for &alpha in &[0.5, 1.0, 2.0, 3.0] {
            let d = choose_cutoff(c(alpha, 0.0), 2, 1e-12);
            assert!(poisson_tail(alpha * alpha, d - 2) < 1e-12);
            // one level lower must not have sufficed
            assert!(poisson_tail(alpha * alpha, d - 3) >= 1e-12);
        }
    }

    #[test]
    fn choose_cutoff_vacuum_is_small_and_monotone() {
        assert!(choose_cutoff(c(0.0, 0.0), 2, 1e-12) <= 4);
        let mut last = 0;
        for k in 0..12 {
            let d = choose_cutoff(c(0.25 * k as f64, 0.0), 2, 1e-12);
            assert!(d >= last);
            last = d;
        }
    }

    #[test]
    fn coherent_vacuum_and_norm() {
        let v = FockVector::coherent(c(0.0, 0.0), 4, 1e-12).unwrap();
        assert_eq!(v.amplitude(0), Complex64::ONE);
        assert_eq!(v.amplitude(3), Complex64::ZERO);

        let alpha = c(2.0, 0.0);
        let d = choose_cutoff(alpha, 2, 1e-12);
        let v = FockVector::coherent(alpha, d, 1e-12).unwrap();
        assert_abs_diff_eq!(v.norm_sqr(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.amplitude(0).re, (-2.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn coherent_rejects_starved_cutoff() {
        let err = FockVector::coherent(c(2.0, 0.0), 4, 1e-12).unwrap_err();
        assert!(matches!(err, Error::TailMass { .. }));
    }

    #[test]
    fn ladder_operators_on_basis_states() {
        let one = FockVector::basis(1, 4);
        let a_one = one.annihilate();
        assert_eq!(a_one.amplitude(0), Complex64::ONE);
        assert_abs_diff_eq!(a_one.norm_sqr(), 1.0, epsilon = 0.0);

        let three = FockVector::basis(3, 6);
        let raised = three.create(1e-12).unwrap();
        assert_eq!(raised.amplitude(4), c(2.0, 0.0));

        // no headroom at the top level
        let top = FockVector::basis(4, 4);
        assert!(matches!(top.create(1e-12), Err(Error::TailMass { .. })));
    }

    #[test]
    fn coherent_is_annihilation_eigenvector() {
        let alpha = c(1.1, -0.4);
        let d = choose_cutoff(alpha, 2, 1e-12);
        let v = FockVector::coherent(alpha, d, 1e-12).unwrap();
        let av = v.annihilate();
        let diff: f64 = (0..=d)
            .map(|n| (av.amplitude(n) - alpha * v.amplitude(n)).norm_sqr())
            .sum();
        assert!(diff < 1e-10, "a|α⟩ deviates from α|α⟩ by {diff:.2e}");
    }

    #[test]
    fn moment_of_vacuum_and_number_state() {
        let vac = FockVector::basis(0, 3);
        assert_eq!(vac.moment(0, 0, 1e-12).unwrap(), Complex64::ONE);
        let three = FockVector::basis(3, 6);
        assert_abs_diff_eq!(three.moment(1, 1, 1e-12).unwrap().re, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn moment_of_coherent_state_matches_eigenvalue_relation() {
        // ⟨α| a†^m a^n |α⟩ = ᾱ^m α^n for a coherent state
        let alpha = c(0.7, 0.2);
        let d = choose_cutoff(alpha, 5, 1e-13);
        let v = FockVector::coherent(alpha, d, 1e-12).unwrap();
        let got = v.moment(2, 1, 1e-9).unwrap();
        let expect = alpha.conj().powu(2) * alpha;
        assert!((got - expect).norm() < 1e-9);
    }

    #[test]
    fn beam_splitter_splits_single_photon() {
        let one = FockVector::basis(1, 3);
        let w = beam_splitter_50_50(&one);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(w.amplitude(1, 0).re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(w.amplitude(0, 1).re, s, epsilon = 1e-15);
        assert_eq!(w.amplitude(1, 1), Complex64::ZERO);

        let vac = FockVector::basis(0, 3);
        assert_eq!(beam_splitter_50_50(&vac).amplitude(0, 0), Complex64::ONE);
    }

    #[test]
    fn partial_trace_of_product_state_is_pure() {
        let vac = FockVector::basis(0, 3);
        let rho = beam_splitter_50_50(&vac).partial_trace_first().unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn partial_trace_of_split_photon_is_maximally_mixed() {
        let one = FockVector::basis(1, 3);
        let rho = beam_splitter_50_50(&one).partial_trace_first().unwrap();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.purity(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn purity_is_independent_of_traced_mode_for_symmetric_outputs() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..8 {
            let v = random_state(&mut rng, 14, 2);
            let w = beam_splitter_50_50(&v);
            let p1 = w.partial_trace_first().unwrap().purity();
            let p2 = w.swap_modes().partial_trace_first().unwrap().purity();
            assert_abs_diff_eq!(p1, p2, epsilon = 1e-12);
        }
    }

    #[test]
    fn damping_identity_vacuum_limit_and_coherent_action() {
        let alpha = c(1.2, 0.3);
        let d = choose_cutoff(alpha, 4, 1e-13);
        let rho = FockVector::coherent(alpha, d, 1e-12)
            .unwrap()
            .density()
            .unwrap();

        let same = rho.amplitude_damping(0.0).unwrap();
        let id_diff: f64 = (same.matrix() - rho.matrix()).iter().map(|z| z.norm()).sum();
        assert!(id_diff < 1e-15);

        // κt = 8 is ~16 intensity e-foldings: effectively vacuum
        let vac = rho.amplitude_damping(8.0).unwrap();
        assert_abs_diff_eq!(vac.matrix()[(0, 0)].re, 1.0, epsilon = 1e-6);

        // coherent in, coherent out at α e^{-κt}
        let kappa_t = 0.7;
        let evolved = rho.amplitude_damping(kappa_t).unwrap();
        let expect = FockVector::coherent(alpha * (-kappa_t).exp(), d, 1e-12)
            .unwrap()
            .density()
            .unwrap();
        let max_diff = (evolved.matrix() - expect.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-8, "coherent fidelity broke: {max_diff:.2e}");
    }

    #[test]
    fn damping_preserves_trace_and_composes() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..5 {
            let v = random_state(&mut rng, 18, 3);
            let rho = v.density().unwrap();
            let once = rho.amplitude_damping(0.4).unwrap();
            assert_abs_diff_eq!(once.trace(), rho.trace(), epsilon = 1e-10);

            let twice = once.amplitude_damping(0.25).unwrap();
            let direct = rho.amplitude_damping(0.65).unwrap();
            let max_diff = (twice.matrix() - direct.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(max_diff < 1e-8, "semigroup violated by {max_diff:.2e}");
        }
    }

    #[test]
    fn density_constructor_rejects_bad_matrices() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            DensityOperator::new(m),
            Err(Error::InvalidDensity(_))
        ));

        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.5, 0.0);
        assert!(matches!(
            DensityOperator::new(m),
            Err(Error::InvalidDensity(_))
        ));

        // Hermitian, unit trace, but indefinite
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.2, 0.0);
        m[(1, 1)] = c(-0.2, 0.0);
        assert!(matches!(
            DensityOperator::new(m),
            Err(Error::InvalidDensity(_))
        ));
    }

    #[test]
    fn ln_factorials_match_direct_products() {
        let lf = ln_factorials(20);
        assert_eq!(lf[0], 0.0);
        assert_abs_diff_eq!(lf[5], 120.0f64.ln(), epsilon = 1e-13);
        assert_abs_diff_eq!(lf[20], (2.432902008176640e18f64).ln(), epsilon = 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn commutator_holds_on_random_states(seed in 0u64..1024) {
            let mut rng = StdRng::seed_from_u64(seed);
            let v = random_state(&mut rng, 16, 2);
            let aad = v.create(1e-12).unwrap().annihilate();
            let ada = v.annihilate().create(1e-12).unwrap();
            // ⟨v| (a a† - a† a) |v⟩ = 1
            let lhs = v.inner(&aad) - v.inner(&ada);
            prop_assert!((lhs - Complex64::ONE).norm() < 1e-12);
        }

        #[test]
        fn beam_splitter_is_unitary(seed in 0u64..1024) {
            let mut rng = StdRng::seed_from_u64(seed);
            let v = random_state(&mut rng, 20, 0);
            let w = beam_splitter_50_50(&v);
            prop_assert!((w.norm_sqr() - v.norm_sqr()).abs() < 1e-12);
        }

        #[test]
        fn partial_trace_has_unit_trace(seed in 0u64..1024) {
            let mut rng = StdRng::seed_from_u64(seed);
            let v = random_state(&mut rng, 12, 0);
            let rho = beam_splitter_50_50(&v).partial_trace_first().unwrap();
            prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        }
    }
}
