//! Phase-space machinery: rectangular grids with Simpson quadrature, the
//! closed-form Wigner function of the superposed state, a displaced-parity
//! oracle evaluated in the truncated number basis, negativity volume, and the
//! Wigner logarithmic negativity (quadrature route plus a quarantined
//! real-displacement analytic shortcut).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::csqs::NormalizedCsqs;
use crate::error::{Error, Result};
use crate::fock::{choose_cutoff, ln_factorials, DensityOperator};
use crate::tolerances::{GRID_TOLERANCE, IMAG_RESIDUE_TOL};

/// Probability mass a displacement-matrix column may lose to truncation
/// before the displaced-parity trace is declared unreliable.
const DISPLACEMENT_TAIL_TOL: f64 = 1e-10;

/// A rectangular phase-space grid over `γ = x + iy` with odd point counts,
/// so composite Simpson weights are well defined in both directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
}

impl PhaseGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self> {
        if ![x_min, x_max, y_min, y_max].iter().all(|b| b.is_finite()) {
            return Err(Error::InvalidParams("grid bounds must be finite".into()));
        }
        if x_min >= x_max || y_min >= y_max {
            return Err(Error::InvalidParams(format!(
                "grid bounds must be ordered, got x [{x_min}, {x_max}], y [{y_min}, {y_max}]"
            )));
        }
        if nx < 3 || ny < 3 || nx % 2 == 0 || ny % 2 == 0 {
            return Err(Error::InvalidParams(format!(
                "point counts must be odd and at least 3, got {nx}x{ny}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    /// The square grid centered on `center` with the default half-width and
    /// resolution; Gaussian tails of states displaced by `|α − center| ≤ 2`
    /// are below 1e−10 at its edge.
    pub fn centered_on(center: Complex64) -> Self {
        Self {
            x_min: center.re - Self::HALF_WIDTH,
            x_max: center.re + Self::HALF_WIDTH,
            y_min: center.im - Self::HALF_WIDTH,
            y_max: center.im + Self::HALF_WIDTH,
            nx: Self::POINTS,
            ny: Self::POINTS,
        }
    }

    const HALF_WIDTH: f64 = 6.0;
    const POINTS: usize = 401;

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.x_min + ix as f64 * self.dx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.y_min + iy as f64 * self.dy()
    }

    /// Whether `point` lies at least `margin` inside every grid edge.
    pub fn covers(&self, point: Complex64, margin: f64) -> bool {
        point.re >= self.x_min + margin
            && point.re <= self.x_max - margin
            && point.im >= self.y_min + margin
            && point.im <= self.y_max - margin
    }

    fn weight_x(&self, ix: usize) -> f64 {
        simpson_coefficient(ix, self.nx) * self.dx() / 3.0
    }

    fn weight_y(&self, iy: usize) -> f64 {
        simpson_coefficient(iy, self.ny) * self.dy() / 3.0
    }
}

impl Default for PhaseGrid {
    /// `[−6, 6]²` at 401×401: adequate for `|α| ≤ 2` (normalization error
    /// ~1e−6, edge tails below 1e−10).
    fn default() -> Self {
        Self::centered_on(Complex64::ZERO)
    }
}

fn simpson_coefficient(i: usize, n: usize) -> f64 {
    if i == 0 || i == n - 1 {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// A Wigner function sampled on a grid, with its Simpson quadrature and the
/// quadrature of its absolute value cached at construction.
#[derive(Debug, Clone)]
pub struct WignerField {
    grid: PhaseGrid,
    values: Vec<f64>,
    total_integral: f64,
    abs_integral: f64,
}

impl WignerField {
    /// Samples `f` on every grid point. Rows are filled in parallel, but each
    /// value lands in its own slot and the quadrature sums run sequentially in
    /// fixed index order, so the result is bit-identical for any worker count.
    pub(crate) fn from_fn<F>(grid: PhaseGrid, f: F) -> Self
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        let nx = grid.nx;
        let mut values = vec![0.0f64; nx * grid.ny];
        values
            .par_chunks_mut(nx)
            .enumerate()
            .for_each(|(iy, row)| {
                let y = grid.y(iy);
                for (ix, slot) in row.iter_mut().enumerate() {
                    *slot = f(Complex64::new(grid.x(ix), y));
                }
            });

        let mut total = 0.0;
        let mut abs = 0.0;
        for iy in 0..grid.ny {
            let wy = grid.weight_y(iy);
            for ix in 0..nx {
                let w = wy * grid.weight_x(ix);
                let v = values[iy * nx + ix];
                total += w * v;
                abs += w * v.abs();
            }
        }
        Self {
            grid,
            values,
            total_integral: total,
            abs_integral: abs,
        }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    /// Row-major values: index `iy * nx + ix`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.nx + ix]
    }

    pub fn total_integral(&self) -> f64 {
        self.total_integral
    }

    pub fn abs_integral(&self) -> f64 {
        self.abs_integral
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Grid indices `(ix, iy)` of the first maximal value in index order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0usize, 0usize);
        let mut best_v = f64::NEG_INFINITY;
        for iy in 0..self.grid.ny {
            for ix in 0..self.grid.nx {
                let v = self.values[iy * self.grid.nx + ix];
                if v > best_v {
                    best_v = v;
                    best = (ix, iy);
                }
            }
        }
        best
    }
}

/// Closed-form Wigner function of the superposed state at `γ`:
/// `N²[|tα + r(2γ* − α*)|² − r²] · (2/π)exp(−2|γ − α|²)`.
pub fn wigner_closed(state: &NormalizedCsqs, gamma: Complex64) -> f64 {
    let alpha = state.alpha();
    let t = state.t();
    let r = state.r();
    let shifted = t * alpha + r * (2.0 * gamma.conj() - alpha.conj());
    let n2 = state.n_const() * state.n_const();
    let envelope = (-2.0 * (gamma - alpha).norm_sqr()).exp();
    n2 * (shifted.norm_sqr() - r * r) * std::f64::consts::FRAC_2_PI * envelope
}

/// Samples the closed-form Wigner function on `grid`.
pub fn wigner_field(state: &NormalizedCsqs, grid: PhaseGrid) -> WignerField {
    WignerField::from_fn(grid, |gamma| wigner_closed(state, gamma))
}

/// A cutoff adequate for displaced-parity evaluation of a state displaced by
/// `alpha` at phase-space point `gamma`: a displaced number state `D(γ)|n⟩`
/// is supported up to roughly `(√n + |γ|)²`, so the two amplitudes add.
pub fn displaced_cutoff(alpha: Complex64, gamma: Complex64, eps_tail: f64) -> usize {
    choose_cutoff(Complex64::from(alpha.norm() + gamma.norm()), 8, eps_tail)
}

/// Displaced-parity oracle: `W(γ) = (2/π) Tr[ρ D(γ) Π D(γ)†]` with `Π` the
/// photon-number parity, evaluated entirely in the truncated number basis.
///
/// The displacement matrix columns must hold their mass below the cutoff;
/// the ρ-weighted column deficiency is checked and a tail-mass error raised
/// when the cutoff is inadequate for `|γ|`. The trace must come out real;
/// a larger imaginary residue indicates a corrupted density matrix.
pub fn wigner_oracle(rho: &DensityOperator, gamma: Complex64) -> Result<f64> {
    let d = rho.dim();
    let disp = displacement_matrix(gamma, d);

    let defect: f64 = (0..d)
        .map(|n| {
            let column_mass: f64 = (0..d).map(|m| disp[(m, n)].norm_sqr()).sum();
            rho.matrix()[(n, n)].re * (1.0 - column_mass)
        })
        .sum();
    if defect > DISPLACEMENT_TAIL_TOL {
        return Err(Error::TailMass {
            cutoff: d - 1,
            lost: defect,
            tolerance: DISPLACEMENT_TAIL_TOL,
        });
    }

    // M = D Π D†, assembled column-scaled so no parity matrix is materialized
    let mut signed = disp.clone();
    for j in 0..d {
        if j % 2 == 1 {
            for i in 0..d {
                signed[(i, j)] = -signed[(i, j)];
            }
        }
    }
    let parity_kernel = signed * disp.adjoint();

    let mut trace = Complex64::ZERO;
    for m in 0..d {
        for n in 0..d {
            trace += rho.matrix()[(m, n)] * parity_kernel[(n, m)];
        }
    }
    if trace.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::InvalidDensity(format!(
            "displaced-parity trace has imaginary residue {:.3e}",
            trace.im
        )));
    }
    Ok(std::f64::consts::FRAC_2_PI * trace.re)
}

/// Number-basis matrix elements `⟨m|D(γ)|n⟩` of the displacement operator,
/// via the associated-Laguerre closed form with log-factorial prefactors
/// (stable far past n = 200):
///
/// `⟨m|D(γ)|n⟩ = √(n!/m!) γ^{m−n} e^{−|γ|²/2} L_n^{(m−n)}(|γ|²)` for `m ≥ n`,
/// and `⟨m|D(γ)|n⟩ = √(m!/n!) (−γ*)^{n−m} e^{−|γ|²/2} L_m^{(n−m)}(|γ|²)`.
fn displacement_matrix(gamma: Complex64, dim: usize) -> DMatrix<Complex64> {
    let mut disp = DMatrix::zeros(dim, dim);
    if gamma == Complex64::ZERO {
        for i in 0..dim {
            disp[(i, i)] = Complex64::ONE;
        }
        return disp;
    }

    let x = gamma.norm_sqr();
    let ln_mag = gamma.norm().ln();
    let lf = ln_factorials(dim - 1);
    let up_phase = gamma / gamma.norm();
    let down_phase = -gamma.conj() / gamma.norm();

    // laguerre[k][j] = L_j^{(k)}(x), built by the degree recurrence
    // (j+1) L_{j+1} = (2j + k + 1 − x) L_j − (j + k) L_{j−1}
    let mut laguerre = vec![vec![0.0f64; dim]; dim];
    for (k, row) in laguerre.iter_mut().enumerate() {
        row[0] = 1.0;
        if dim > 1 {
            row[1] = 1.0 + k as f64 - x;
        }
        for j in 1..dim - 1 {
            row[j + 1] = ((2 * j + k + 1) as f64 - x) * row[j] - (j + k) as f64 * row[j - 1];
            row[j + 1] /= (j + 1) as f64;
        }
    }

    for m in 0..dim {
        for n in 0..dim {
            let (lo, hi) = if m >= n { (n, m) } else { (m, n) };
            let k = hi - lo;
            let magnitude = (0.5 * (lf[lo] - lf[hi]) + k as f64 * ln_mag - 0.5 * x).exp();
            let phase = if m >= n { up_phase } else { down_phase };
            disp[(m, n)] = phase.powu(k as u32) * magnitude * laguerre[k][lo];
        }
    }
    disp
}

/// Quadrature of the negative part, `∫ max(−W, 0) d²γ`.
pub fn negativity_volume(field: &WignerField) -> f64 {
    let grid = field.grid();
    let mut volume = 0.0;
    for iy in 0..grid.ny {
        let wy = grid.weight_y(iy);
        for ix in 0..grid.nx {
            let v = field.values[iy * grid.nx + ix];
            if v < 0.0 {
                volume -= wy * grid.weight_x(ix) * v;
            }
        }
    }
    volume
}

/// Wigner logarithmic negativity from a sampled field: `log₂ ∫|W| d²γ`.
///
/// Requires the field's own normalization quadrature to be adequate; a total
/// integral off by more than the grid tolerance means the bounds or the
/// resolution are starving the state.
pub fn wln_from_field(field: &WignerField) -> Result<f64> {
    if (field.total_integral - 1.0).abs() > GRID_TOLERANCE {
        return Err(Error::InadequateGrid {
            total: field.total_integral,
            tolerance: GRID_TOLERANCE,
        });
    }
    Ok(field.abs_integral.log2())
}

/// Wigner logarithmic negativity by quadrature of the closed-form field.
pub fn wln_numeric(state: &NormalizedCsqs, grid: PhaseGrid) -> Result<f64> {
    wln_from_field(&wigner_field(state, grid))
}

/// Analytic shortcut `log₂[N²((t+r)²α² − 5r²)]`, defined only for real `α`.
///
/// Quarantined: its values disagree with the quadrature definition over most
/// of the parameter range (it goes negative where `log₂∫|W|` cannot), so it
/// is reported for reference and never used in any decision.
pub fn wln_closed_real(state: &NormalizedCsqs) -> Result<f64> {
    let alpha = state.alpha();
    if alpha.im.abs() > 1e-12 {
        return Err(Error::UnsupportedDomain(
            "analytic log-negativity shortcut is defined only for real displacement".into(),
        ));
    }
    let n2 = state.n_const() * state.n_const();
    let tr = state.t() + state.r();
    let argument = n2 * (tr * tr * alpha.re * alpha.re - 5.0 * state.r() * state.r());
    if argument <= 0.0 {
        return Err(Error::NonPositiveLogArgument { argument });
    }
    Ok(argument.log2())
}
