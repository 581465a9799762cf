//! Position densities, Husimi Q functions, and plateau flatness on grids.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gaussian::SuperpositionState;

pub const DEFAULT_POSITION_POINTS: usize = 2001;
pub const DEFAULT_PHASE_POINTS: usize = 301;

/// A grid whose trapezoid integral falls below this is flagged as not covering the support.
pub const COVERAGE_FLAG: f64 = 0.999;

fn check_axis(name: &str, lo: f64, hi: f64, points: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidGrid(format!("{name} range [{lo}, {hi}] is empty or non-finite")));
    }
    if points < 2 {
        return Err(Error::InvalidGrid(format!("{name} needs at least 2 points, got {points}")));
    }
    Ok(())
}

fn node(lo: f64, hi: f64, points: usize, i: usize) -> f64 {
    if i + 1 == points {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (points - 1) as f64
    }
}

/// Uniform grid over the position quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositionGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl PositionGrid {
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        let g = Self { x_min, x_max, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        check_axis("x", self.x_min, self.x_max, self.points)
    }

    /// `±(√2 α_max + 8 e^{-r})` with the default point count.
    pub fn auto(state: &SuperpositionState) -> Self {
        let half = SQRT_2 * state.max_abs_amplitude() + 8.0 * (-state.squeeze().value()).exp();
        Self { x_min: -half, x_max: half, points: DEFAULT_POSITION_POINTS }
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        node(self.x_min, self.x_max, self.points, i)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.x(i)).collect()
    }
}

/// Uniform grid over complex `β`, `points` per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub points: usize,
}

impl PhaseSpaceGrid {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, points: usize) -> Result<Self> {
        let g = Self { re_min, re_max, im_min, im_max, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        check_axis("re", self.re_min, self.re_max, self.points)?;
        check_axis("im", self.im_min, self.im_max, self.points)
    }

    /// Square grid of the given radius about the origin.
    pub fn square(radius: f64, points: usize) -> Result<Self> {
        Self::new(-radius, radius, -radius, radius, points)
    }

    /// Axes sized from the Q-function spread of a squeezed component:
    /// `Var(Re β) = (e^{-2r} + 1)/4`, `Var(Im β) = (e^{2r} + 1)/4`.
    /// Re half-width `α_max + max(6, 9σ_re)`, Im half-width `max(6, 9σ_im)`.
    pub fn auto(state: &SuperpositionState) -> Self {
        let r = state.squeeze().value();
        let sigma_re = (0.25 * ((-2.0 * r).exp() + 1.0)).sqrt();
        let sigma_im = (0.25 * ((2.0 * r).exp() + 1.0)).sqrt();
        let re = state.max_abs_amplitude() + f64::max(6.0, 9.0 * sigma_re);
        let im = f64::max(6.0, 9.0 * sigma_im);
        Self { re_min: -re, re_max: re, im_min: -im, im_max: im, points: DEFAULT_PHASE_POINTS }
    }

    pub fn re(&self, i: usize) -> f64 {
        node(self.re_min, self.re_max, self.points, i)
    }

    pub fn im(&self, j: usize) -> f64 {
        node(self.im_min, self.im_max, self.points, j)
    }

    pub fn re_spacing(&self) -> f64 {
        (self.re_max - self.re_min) / (self.points - 1) as f64
    }

    pub fn im_spacing(&self) -> f64 {
        (self.im_max - self.im_min) / (self.points - 1) as f64
    }

    /// `β` at flat index `k = i * points + j` (re-major).
    pub fn beta(&self, k: usize) -> C64 {
        C64::new(self.re(k / self.points), self.im(k % self.points))
    }

    pub fn len(&self) -> usize {
        self.points * self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    Position(PositionGrid),
    PhaseSpace(PhaseSpaceGrid),
}

/// Sampled nonnegative field with its trapezoid-rule integral.
///
/// Phase-space values are stored re-major: `values[i * points + j]` sits at
/// `β = re(i) + i·im(j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub integral_estimate: f64,
}

/// Trapezoid weights (without the spacing factor), summed in index order.
fn trapezoid_1d(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let mut acc = 0.0;
    for (i, v) in values.iter().enumerate() {
        acc += if i == 0 || i + 1 == n { 0.5 * v } else { *v };
    }
    acc * h
}

impl GridResult {
    pub fn position(grid: PositionGrid, values: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.points {
            return Err(Error::DimensionMismatch { expected: grid.points, got: values.len() });
        }
        let integral_estimate = trapezoid_1d(&values, grid.spacing());
        Ok(Self { grid: GridSpec::Position(grid), values, integral_estimate })
    }

    pub fn phase_space(grid: PhaseSpaceGrid, values: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
        }
        let n = grid.points;
        let rows: Vec<f64> = values.chunks(n).map(|row| trapezoid_1d(row, grid.im_spacing())).collect();
        let integral_estimate = trapezoid_1d(&rows, grid.re_spacing());
        Ok(Self { grid: GridSpec::PhaseSpace(grid), values, integral_estimate })
    }

    /// False when the trapezoid integral suggests the grid misses probability.
    pub fn covers_support(&self) -> bool {
        self.integral_estimate >= COVERAGE_FLAG
    }
}

/// `|ψ(x)|²` on a position grid.
pub fn position_density(state: &SuperpositionState, grid: &PositionGrid, exec: Exec) -> Result<GridResult> {
    grid.validate()?;
    let values = exec.map_range(grid.points, |i| state.wavefunction(grid.x(i)).norm_sqr());
    GridResult::position(*grid, values)
}

/// `Q(β) = |⟨β|ψ⟩|² / π` on a phase-space grid.
pub fn husimi_q(state: &SuperpositionState, grid: &PhaseSpaceGrid, exec: Exec) -> Result<GridResult> {
    grid.validate()?;
    let values = exec.map_range(grid.len(), |k| state.coherent_projection(grid.beta(k)).norm_sqr() / PI);
    GridResult::phase_space(*grid, values)
}

/// Plateau quality of a position density.
///
/// The window is the narrowest interval symmetric about the center of mass
/// that holds `coverage` of the grid's probability. `ripple` is
/// `(max - min) / mean` of the density over that window, where `mean` is the
/// window mass divided by its width. This is an operational flatness measure
/// for quasi-rectangle states; zero means perfectly flat.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub coverage: f64,
    pub center_of_mass: f64,
    pub plateau_window: (f64, f64),
    pub ripple: f64,
    pub plateau_mass: f64,
}

/// Piecewise-linear view of a sampled density.
struct LinearDensity<'a> {
    grid: PositionGrid,
    values: &'a [f64],
    cumulative: Vec<f64>,
}

impl<'a> LinearDensity<'a> {
    fn new(grid: PositionGrid, values: &'a [f64]) -> Self {
        let h = grid.spacing();
        let mut cumulative = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in values.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            cumulative.push(acc);
        }
        Self { grid, values, cumulative }
    }

    fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    fn locate(&self, y: f64) -> (usize, f64) {
        let h = self.grid.spacing();
        let y = y.clamp(self.grid.x_min, self.grid.x_max);
        let i = (((y - self.grid.x_min) / h).floor() as usize).min(self.grid.points - 2);
        (i, y - self.grid.x(i))
    }

    fn value_at(&self, y: f64) -> f64 {
        let (i, d) = self.locate(y);
        let t = d / self.grid.spacing();
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    fn cdf(&self, y: f64) -> f64 {
        let (i, d) = self.locate(y);
        let h = self.grid.spacing();
        self.cumulative[i] + self.values[i] * d + (self.values[i + 1] - self.values[i]) * d * d / (2.0 * h)
    }

    fn mass(&self, lo: f64, hi: f64) -> f64 {
        self.cdf(hi) - self.cdf(lo)
    }
}

pub fn flatness_report(density: &GridResult, coverage: f64) -> Result<FlatnessReport> {
    let GridSpec::Position(grid) = density.grid else {
        return Err(Error::InvalidGrid("flatness needs a position density".into()));
    };
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::InvalidCoverage(coverage));
    }
    let lin = LinearDensity::new(grid, &density.values);
    let total = lin.total();
    if total.is_nan() || total <= 0.0 || density.values.iter().all(|v| *v == 0.0) {
        return Err(Error::DegenerateDensity);
    }
    let h = grid.spacing();
    let first_moment = trapezoid_1d(
        &density.values.iter().enumerate().map(|(i, v)| grid.x(i) * v).collect::<Vec<_>>(),
        h,
    );
    let com = first_moment / total;
    let target = coverage * total;
    let widest = f64::min(com - grid.x_min, grid.x_max - com);
    let reached = lin.mass(com - widest, com + widest);
    if reached < target {
        return Err(Error::CoverageUnreachable { coverage, reached: reached / total });
    }
    let (mut lo, mut hi) = (0.0, widest);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lin.mass(com - mid, com + mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let half = hi;
    let (a, b) = (com - half, com + half);
    let mass = lin.mass(a, b);
    let mut max = f64::max(lin.value_at(a), lin.value_at(b));
    let mut min = f64::min(lin.value_at(a), lin.value_at(b));
    for (i, v) in density.values.iter().enumerate() {
        let x = grid.x(i);
        if x > a && x < b {
            max = max.max(*v);
            min = min.min(*v);
        }
    }
    let mean = mass / (b - a);
    Ok(FlatnessReport {
        coverage,
        center_of_mass: com,
        plateau_window: (a, b),
        ripple: (max - min) / mean,
        plateau_mass: mass,
    })
}
