//! Truncated Fock-space oracle.
//!
//! Operators are dense matrices on the lowest `D` number states. Every
//! generator used by the protocol is a diagonal-phase rotation of one of two
//! real symmetric matrices:
//!
//! * `a e^{iφ} + a† e^{-iφ} = R_φ† (a + a†) R_φ`, with `R_φ = diag(e^{i n φ})`;
//! * `i(a² - a†²) = R_{π/4}† (a² + a†²) R_{π/4}`.
//!
//! Both are diagonalized once per dimension, after which displacements,
//! squeezes, and the interaction-picture evolution are exact spectral
//! functions of the truncated generators. In particular
//! `cos[iθ(a - a†)] = (D(θ) + D(-θ))/2` holds to rounding on the truncated
//! space, whatever `D` is; the tail check is what guards the physics.
//!
//! Joint electronic ⊗ motional vectors are laid out as `(|g⟩ block, |e⟩ block)`.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;
use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{SqueezeParameter, SuperpositionState};
use crate::protocol::PulseSchedule;

pub type FockVector = DVector<C64>;
pub type FockMatrix = DMatrix<C64>;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub const MIN_DIMENSION: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub dimension: usize,
    /// Largest probability allowed in the top tenth of Fock levels.
    pub tail_mass_bound: f64,
    /// When false, tail masses are measured and reported but never raise errors.
    #[serde(default = "default_enforce")]
    pub enforce: bool,
}

fn default_enforce() -> bool {
    true
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { dimension: 256, tail_mass_bound: 1e-10, enforce: true }
    }
}

impl TruncationPolicy {
    pub fn new(dimension: usize, tail_mass_bound: f64) -> Result<Self> {
        let p = Self { dimension, tail_mass_bound, enforce: true };
        p.validate()?;
        Ok(p)
    }

    pub fn with_dimension(dimension: usize) -> Result<Self> {
        Self::new(dimension, Self::default().tail_mass_bound)
    }

    pub fn report_only(self) -> Self {
        Self { enforce: false, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < MIN_DIMENSION {
            return Err(Error::InvalidPolicy(format!(
                "dimension {} below minimum {MIN_DIMENSION}",
                self.dimension
            )));
        }
        if !(self.tail_mass_bound > 0.0 && self.tail_mass_bound < 1.0) {
            return Err(Error::InvalidPolicy(format!(
                "tail mass bound {} outside (0, 1)",
                self.tail_mass_bound
            )));
        }
        Ok(())
    }

    /// First Fock index of the top tenth of levels.
    pub fn tail_start(&self) -> usize {
        self.dimension - self.dimension.div_ceil(10)
    }

    /// Tail mass of `v` (relative to its squared norm).
    pub fn tail_mass(&self, v: &FockVector) -> f64 {
        let total = v.norm_squared();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = v.iter().skip(self.tail_start()).map(|c| c.norm_sqr()).sum();
        tail / total
    }

    /// Returns the tail mass, or an error if it exceeds the bound and the policy enforces it.
    pub fn check(&self, v: &FockVector, context: impl FnOnce() -> String) -> Result<f64> {
        let tail = self.tail_mass(v);
        if self.enforce && (tail.is_nan() || tail >= self.tail_mass_bound) {
            return Err(Error::TruncationTooSmall {
                context: context(),
                tail_mass: tail,
                bound: self.tail_mass_bound,
                dimension: self.dimension,
            });
        }
        Ok(tail)
    }
}

/// Ladder operators on the truncated space.
#[derive(Clone, Debug)]
pub struct FockOperators {
    pub dimension: usize,
    pub a: FockMatrix,
    pub a_dag: FockMatrix,
}

impl FockOperators {
    pub fn new(dimension: usize) -> Self {
        let mut a = FockMatrix::zeros(dimension, dimension);
        for n in 1..dimension {
            a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        let a_dag = a.adjoint();
        Self { dimension, a, a_dag }
    }
}

/// Eigenbasis of a real symmetric generator, with its complexified eigenvectors.
#[derive(Clone, Debug)]
struct Spectrum {
    values: DVector<f64>,
    vectors: FockMatrix,
}

impl Spectrum {
    fn of(sym: DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(sym);
        let vectors = eig.eigenvectors.map(|x| C64::new(x, 0.0));
        Self { values: eig.eigenvalues, vectors }
    }

    /// `R_φ† f(G) R_φ` as a dense matrix.
    fn matrix(&self, phase: f64, f: impl Fn(f64) -> C64) -> FockMatrix {
        let mut left = self.vectors.clone();
        for (k, mut col) in left.column_iter_mut().enumerate() {
            col *= f(self.values[k]);
        }
        let mut m = left * self.vectors.transpose();
        if phase != 0.0 {
            let d = m.nrows();
            for j in 0..d {
                for i in 0..d {
                    m[(i, j)] *= C64::from_polar(1.0, (j as f64 - i as f64) * phase);
                }
            }
        }
        m
    }

    /// `R_φ† f(G) R_φ v` without forming the matrix.
    fn apply(&self, phase: f64, f: impl Fn(f64) -> C64, v: &FockVector) -> FockVector {
        let rotated = FockVector::from_iterator(
            v.len(),
            v.iter().enumerate().map(|(n, z)| z * C64::from_polar(1.0, n as f64 * phase)),
        );
        let mut coeffs = self.vectors.tr_mul(&rotated);
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= f(self.values[k]);
        }
        let mut out = &self.vectors * coeffs;
        for (n, z) in out.iter_mut().enumerate() {
            *z *= C64::from_polar(1.0, -(n as f64) * phase);
        }
        out
    }
}

/// Truncated motional Hilbert space with cached generator spectra.
///
/// Read-only after construction; share it by reference across threads.
#[derive(Clone, Debug)]
pub struct FockSpace {
    policy: TruncationPolicy,
    ops: FockOperators,
    quadrature: Spectrum,
    pair: Spectrum,
}

impl FockSpace {
    pub fn new(policy: TruncationPolicy) -> Result<Self> {
        policy.validate()?;
        let d = policy.dimension;
        let ops = FockOperators::new(d);
        let mut q = DMatrix::<f64>::zeros(d, d);
        let mut k = DMatrix::<f64>::zeros(d, d);
        for n in 1..d {
            let s = (n as f64).sqrt();
            q[(n - 1, n)] = s;
            q[(n, n - 1)] = s;
        }
        for n in 2..d {
            let s = ((n * (n - 1)) as f64).sqrt();
            k[(n - 2, n)] = s;
            k[(n, n - 2)] = s;
        }
        Ok(Self { policy, ops, quadrature: Spectrum::of(q), pair: Spectrum::of(k) })
    }

    pub fn dimension(&self) -> usize {
        self.policy.dimension
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn operators(&self) -> &FockOperators {
        &self.ops
    }

    pub fn vacuum(&self) -> FockVector {
        basis_vector(self.dimension(), 0)
    }

    /// `S(r) = exp((r/2)(a² - a†²))`: squeezes the position quadrature for `r > 0`.
    pub fn squeeze_matrix(&self, r: SqueezeParameter) -> Result<FockMatrix> {
        let half = 0.5 * r.value();
        let m = self.pair.matrix(FRAC_PI_4, |w| C64::from_polar(1.0, -half * w));
        self.policy.check(&m.column(0).into_owned(), || format!("S(r={})|0>", r.value()))?;
        Ok(m)
    }

    pub fn apply_squeeze(&self, r: SqueezeParameter, v: &FockVector) -> FockVector {
        let half = 0.5 * r.value();
        self.pair.apply(FRAC_PI_4, |w| C64::from_polar(1.0, -half * w), v)
    }

    /// `D(α) = exp(α a† - α* a)`.
    pub fn displacement_matrix(&self, alpha: C64) -> Result<FockMatrix> {
        let (mag, phase) = displacement_rotation(alpha);
        let m = self.quadrature.matrix(phase, |q| C64::from_polar(1.0, mag * q));
        self.policy.check(&m.column(0).into_owned(), || format!("D({alpha})|0>"))?;
        Ok(m)
    }

    pub fn apply_displacement(&self, alpha: C64, v: &FockVector) -> FockVector {
        let (mag, phase) = displacement_rotation(alpha);
        self.quadrature.apply(phase, |q| C64::from_polar(1.0, mag * q), v)
    }

    /// `cos[iθ(a - a†)]`.
    pub fn cosine_operator(&self, theta: f64) -> FockMatrix {
        self.quadrature.matrix(FRAC_PI_2, |q| C64::new((theta * q).cos(), 0.0))
    }

    /// Interaction-picture propagator for `H = g(a e^{iφ} + a† e^{-iφ})(A_eg + A_ge)`
    /// over pulse area `gt`:
    /// `cos(gt B) ⊗ 1 - i sin(gt B) ⊗ σ_x` with `B = a e^{iφ} + a† e^{-iφ}`.
    pub fn evolution_operator(&self, gt: f64, phi: f64) -> FockMatrix {
        let d = self.dimension();
        let c = self.quadrature.matrix(phi, |q| C64::new((gt * q).cos(), 0.0));
        let s = self.quadrature.matrix(phi, |q| C64::new(0.0, -(gt * q).sin()));
        let mut u = FockMatrix::zeros(2 * d, 2 * d);
        u.view_mut((0, 0), (d, d)).copy_from(&c);
        u.view_mut((d, d), (d, d)).copy_from(&c);
        u.view_mut((0, d), (d, d)).copy_from(&s);
        u.view_mut((d, 0), (d, d)).copy_from(&s);
        u
    }

    /// Same propagator as [`Self::evolution_operator`], applied blockwise through
    /// the cached eigenbasis so each pulse costs O(D²) instead of O(D³).
    pub fn apply_evolution(&self, gt: f64, phi: f64, state: &JointFockState) -> Result<JointFockState> {
        if state.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: state.dimension() });
        }
        let (g, e) = (state.ground_block(), state.excited_block());
        let cos = |q: f64| C64::new((gt * q).cos(), 0.0);
        let sin = |q: f64| C64::new(0.0, -(gt * q).sin());
        let q = &self.quadrature;
        let ground = q.apply(phi, cos, &g) + q.apply(phi, sin, &e);
        let excited = q.apply(phi, sin, &g) + q.apply(phi, cos, &e);
        JointFockState::from_blocks(&ground, &excited)
    }

    /// Interaction Hamiltonian divided by `g`, on the joint space.
    pub fn interaction_hamiltonian(&self, phi: f64) -> FockMatrix {
        let d = self.dimension();
        let b = &self.ops.a * C64::from_polar(1.0, phi) + &self.ops.a_dag * C64::from_polar(1.0, -phi);
        let mut h = FockMatrix::zeros(2 * d, 2 * d);
        h.view_mut((0, d), (d, d)).copy_from(&b);
        h.view_mut((d, 0), (d, d)).copy_from(&b);
        h
    }

    /// `D(α) S(r) |0⟩`, tail-checked.
    pub fn displaced_squeezed(&self, alpha: f64, r: SqueezeParameter) -> Result<FockVector> {
        let sv = self.apply_squeeze(r, &self.vacuum());
        let v = self.apply_displacement(C64::new(alpha, 0.0), &sv);
        self.policy.check(&v, || format!("|alpha={alpha}, r={}>", r.value()))?;
        Ok(v)
    }
}

/// `D(α) = exp(i|α| B_φ)` with `φ = π/2 - arg α`.
fn displacement_rotation(alpha: C64) -> (f64, f64) {
    (alpha.norm(), FRAC_PI_2 - alpha.arg())
}

pub fn basis_vector(dimension: usize, n: usize) -> FockVector {
    let mut v = FockVector::zeros(dimension);
    v[n] = ONE;
    v
}

/// `|⟨u|v⟩|² / (‖u‖² ‖v‖²)`.
pub fn fidelity(u: &FockVector, v: &FockVector) -> f64 {
    u.dotc(v).norm_sqr() / (u.norm_squared() * v.norm_squared())
}

/// Electronic ⊗ motional vector with its norm tracked explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct JointFockState {
    dimension: usize,
    vector: FockVector,
    norm: f64,
}

impl JointFockState {
    pub fn from_blocks(ground: &FockVector, excited: &FockVector) -> Result<Self> {
        let d = ground.len();
        if excited.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: excited.len() });
        }
        let mut vector = FockVector::zeros(2 * d);
        vector.rows_mut(0, d).copy_from(ground);
        vector.rows_mut(d, d).copy_from(excited);
        let norm = vector.norm();
        Ok(Self { dimension: d, vector, norm })
    }

    /// `|motional⟩ ⊗ |e⟩`.
    pub fn excited(motional: &FockVector) -> Self {
        Self::from_blocks(&FockVector::zeros(motional.len()), motional).expect("equal block sizes")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vector(&self) -> &FockVector {
        &self.vector
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn ground_block(&self) -> FockVector {
        self.vector.rows(0, self.dimension).into_owned()
    }

    pub fn excited_block(&self) -> FockVector {
        self.vector.rows(self.dimension, self.dimension).into_owned()
    }

    pub fn evolve(&self, u: &FockMatrix) -> Result<Self> {
        if u.nrows() != self.vector.len() || u.ncols() != self.vector.len() {
            return Err(Error::DimensionMismatch { expected: self.vector.len(), got: u.nrows() });
        }
        let vector = u * &self.vector;
        let norm = vector.norm();
        Ok(Self { dimension: self.dimension, vector, norm })
    }
}

/// Project onto `|e⟩`: returns the unnormalized excited block and
/// `‖block‖² / ‖state‖²`.
pub fn conditional_measure_excited(state: &JointFockState) -> Result<(FockVector, f64)> {
    let block = state.excited_block();
    let total = state.norm().powi(2);
    let p = if total > 0.0 { block.norm_squared() / total } else { 0.0 };
    if p.is_nan() || p < 1e-300 {
        return Err(Error::BranchVanished(p));
    }
    Ok((block, p))
}

#[derive(Clone, Debug)]
pub struct OracleRun {
    /// Normalized final motional state.
    pub state: FockVector,
    pub branch_probabilities: Vec<f64>,
    pub cumulative_probability: f64,
    /// Squared norm of the unnormalized final block relative to the initial state.
    pub unnormalized_norm_sq: f64,
    /// Largest tail mass seen along the run.
    pub max_tail_mass: f64,
}

/// Simulate the pulse sequence from `S(r)|0⟩ ⊗ |e⟩`, keeping only the
/// excited-state record.
pub fn run_protocol_oracle(schedule: &PulseSchedule, r: SqueezeParameter, space: &FockSpace) -> Result<OracleRun> {
    let policy = space.policy();
    let initial = space.apply_squeeze(r, &space.vacuum());
    let mut max_tail = policy.check(&initial, || format!("initial squeezed vacuum S(r={})|0>", r.value()))?;
    let initial_norm_sq = initial.norm_squared();
    let mut joint = JointFockState::excited(&initial);
    let mut branch_probabilities = Vec::with_capacity(schedule.pulses());
    for (j, &gt) in schedule.areas().iter().enumerate() {
        let evolved = space.apply_evolution(gt, FRAC_PI_2, &joint)?;
        let (block, p) = conditional_measure_excited(&evolved)?;
        let tail = policy.check(&block, || format!("pulse {j} (area {gt})"))?;
        max_tail = max_tail.max(tail);
        branch_probabilities.push(p);
        joint = JointFockState::excited(&block);
    }
    let last = joint.excited_block();
    let unnormalized_norm_sq = last.norm_squared() / initial_norm_sq;
    let state = last.unscale(last.norm());
    Ok(OracleRun {
        state,
        cumulative_probability: branch_probabilities.iter().product(),
        branch_probabilities,
        unnormalized_norm_sq,
        max_tail_mass: max_tail,
    })
}

/// Fock-basis image of an analytic superposition, normalized.
pub fn analytic_to_fock(state: &SuperpositionState, space: &FockSpace) -> Result<FockVector> {
    let sv = space.apply_squeeze(state.squeeze(), &space.vacuum());
    space
        .policy()
        .check(&sv, || format!("squeezed vacuum S(r={})|0>", state.squeeze().value()))?;
    let mut acc = FockVector::zeros(space.dimension());
    for c in state.components() {
        let v = space.apply_displacement(C64::new(c.amplitude, 0.0), &sv);
        space.policy().check(&v, || format!("component alpha={}", c.amplitude))?;
        acc += v * c.weight;
    }
    let n = acc.norm();
    Ok(acc.unscale(n))
}

/// Normalized Hermite functions `φ_0(x) … φ_{n-1}(x)`, upward recurrence.
pub fn hermite_functions(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(phi0);
    if n > 1 {
        out.push(std::f64::consts::SQRT_2 * x * phi0);
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// `⟨x|ψ⟩ = Σ_n ψ_n φ_n(x)`.
pub fn fock_position_amplitude(v: &FockVector, x: f64) -> C64 {
    hermite_functions(x, v.len()).iter().zip(v.iter()).map(|(h, c)| c * *h).sum()
}

/// `⟨n|β⟩ = e^{-|β|²/2} βⁿ/√n!` for `n < dimension`.
pub fn coherent_state(beta: C64, dimension: usize) -> FockVector {
    let mut v = FockVector::zeros(dimension);
    let mut c = C64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    for n in 0..dimension {
        if n > 0 {
            c = c * beta / (n as f64).sqrt();
        }
        v[n] = c;
    }
    v
}

/// `⟨β|ψ⟩`.
pub fn fock_coherent_projection(v: &FockVector, beta: C64) -> C64 {
    coherent_state(beta, v.len()).dotc(v)
}

/// Plain-text dump: one `index real imag` line per entry, 17 significant digits.
pub fn write_fock_vector<W: Write>(mut w: W, v: &FockVector) -> std::io::Result<()> {
    for (n, z) in v.iter().enumerate() {
        writeln!(w, "{n} {:.16e} {:.16e}", z.re, z.im)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

    fn sq(r: f64) -> SqueezeParameter {
        SqueezeParameter::new(r).unwrap()
    }

    fn space(d: usize) -> FockSpace {
        FockSpace::new(TruncationPolicy::with_dimension(d).unwrap()).unwrap()
    }

    #[test]
    fn ladder_layout() {
        let ops = FockOperators::new(16);
        assert_eq!(ops.a[(2, 3)], C64::new(3f64.sqrt(), 0.0));
        assert_eq!(ops.a[(3, 2)], ZERO);
        let comm = &ops.a * &ops.a_dag - &ops.a_dag * &ops.a;
        for n in 0..15 {
            assert!((comm[(n, n)] - ONE).norm() < 1e-14);
        }
        assert!((comm[(15, 15)] - ONE).norm() > 1.0);
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(8, 1e-10).is_err());
        assert!(TruncationPolicy::new(64, 0.0).is_err());
        assert!(TruncationPolicy::new(64, 1.0).is_err());
        assert_eq!(TruncationPolicy::default().tail_start(), 230);
    }

    #[test]
    fn squeeze_matrix_values() {
        let s = space(128);
        let id = s.squeeze_matrix(sq(0.0)).unwrap();
        assert!((id - FockMatrix::identity(128, 128)).norm() < 1e-12);
        let m = s.squeeze_matrix(sq(1.0)).unwrap();
        assert_relative_eq!(m[(0, 0)].re, 1.0 / 1.0f64.cosh().sqrt(), epsilon = 1e-12);
        assert!(m[(0, 0)].im.abs() < 1e-12);
        assert!(m[(1, 0)].norm() < 1e-12);
    }

    #[test]
    fn squeeze_narrows_position() {
        let s = space(128);
        let v = s.apply_squeeze(sq(1.0), &s.vacuum());
        let ops = s.operators();
        let x = (&ops.a + &ops.a_dag) / C64::new(2f64.sqrt(), 0.0);
        let var = v.dotc(&(&x * (&x * &v))).re;
        assert_relative_eq!(var, (-2.0f64).exp() / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn displacement_values() {
        let s = space(64);
        let id = s.displacement_matrix(ZERO).unwrap();
        assert!((id - FockMatrix::identity(64, 64)).norm() < 1e-12);
        let d1 = s.displacement_matrix(ONE).unwrap();
        assert_relative_eq!(d1[(0, 0)].re, (-0.5f64).exp(), epsilon = 1e-12);
        let d2 = s.displacement_matrix(C64::new(2.0, 0.0)).unwrap();
        assert_relative_eq!(d2.column(0).norm_squared(), 1.0, epsilon = 1e-10);
        // Poisson amplitudes for complex α
        let alpha = C64::new(0.6, -1.1);
        let col = s.displacement_matrix(alpha).unwrap().column(0).into_owned();
        let expected = coherent_state(alpha, 64);
        assert!((col - expected).norm() < 1e-11);
    }

    #[test]
    fn truncation_errors_fire() {
        let s = space(16);
        assert!(matches!(
            s.displacement_matrix(C64::new(4.0, 0.0)),
            Err(Error::TruncationTooSmall { .. })
        ));
        assert!(matches!(s.squeeze_matrix(sq(2.0)), Err(Error::TruncationTooSmall { .. })));
        let lax = FockSpace::new(TruncationPolicy::with_dimension(16).unwrap().report_only()).unwrap();
        assert!(lax.displacement_matrix(C64::new(4.0, 0.0)).is_ok());
    }

    #[test]
    fn measure_examples() {
        let d = 16;
        let vac = basis_vector(d, 0);
        let (block, p) = conditional_measure_excited(&JointFockState::excited(&vac)).unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(block, vac);
        let half = &vac / C64::new(2f64.sqrt(), 0.0);
        let mixed = JointFockState::from_blocks(&half, &half).unwrap();
        let (_, p) = conditional_measure_excited(&mixed).unwrap();
        assert_relative_eq!(p, 0.5, epsilon = 1e-15);
        let ground_only = JointFockState::from_blocks(&vac, &FockVector::zeros(d)).unwrap();
        assert!(matches!(conditional_measure_excited(&ground_only), Err(Error::BranchVanished(_))));
    }

    #[test]
    fn first_pulse_branch_probability() {
        let s = space(64);
        let u = s.evolution_operator(1.0, FRAC_PI_2);
        let joint = JointFockState::excited(&s.vacuum()).evolve(&u).unwrap();
        let (block, p) = conditional_measure_excited(&joint).unwrap();
        assert_relative_eq!(p, 0.5 * (1.0 + (-2.0f64).exp()), epsilon = 1e-12);
        let expected = (s.apply_displacement(ONE, &s.vacuum()) + s.apply_displacement(-ONE, &s.vacuum())).scale(0.5);
        assert!((block - expected).norm() < 1e-12);
    }

    #[test]
    fn hermite_recurrence_low_orders() {
        let x = 0.83;
        let h = hermite_functions(x, 4);
        let g = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
        assert_relative_eq!(h[0], g, epsilon = 1e-15);
        assert_relative_eq!(h[1], 2f64.sqrt() * x * g, epsilon = 1e-15);
        assert_relative_eq!(h[2], (2.0 * x * x - 1.0) / 2f64.sqrt() * g, epsilon = 1e-15);
        assert_relative_eq!(h[3], (2.0 * x * x * x - 3.0 * x) / 3f64.sqrt() * g, epsilon = 1e-14);
        // no overflow at high order
        assert!(hermite_functions(12.0, 300).iter().all(|v| v.is_finite() && v.abs() < 1.0));
    }

    #[test]
    fn dump_format() {
        let v = FockVector::from_vec(vec![C64::new(0.5, -0.25), C64::new(1.0 / 3.0, 0.0)]);
        let mut buf = Vec::new();
        write_fock_vector(&mut buf, &v).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "0 5.0000000000000000e-1 -2.5000000000000000e-1\n1 3.3333333333333331e-1 0.0000000000000000e0\n"
        );
    }
}
