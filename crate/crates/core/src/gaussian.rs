//! Closed-form algebra for real-displaced squeezed vacua `|α, r⟩ = D(α) S(r) |0⟩`.
//!
//! Conventions: `x = (a + a†)/√2` with vacuum wavefunction `π^{-1/4} e^{-x²/2}`.
//! A positive squeeze parameter narrows the position quadrature, so
//! `Var(x) = e^{-2r}/2`, and a real displacement `α` moves the position
//! centroid to `√2 α`. Exponents are assembled in log form so that large
//! `|r|` or large separations underflow to exact zeros instead of NaN.

use std::f64::consts::{LN_2, PI, SQRT_2};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SqueezeParameter(f64);

impl SqueezeParameter {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() {
            Ok(Self(r))
        } else {
            Err(Error::NonFiniteSqueeze(r))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `ln cosh r`, safe for any finite `r`.
    pub fn ln_mu(self) -> f64 {
        let a = self.0.abs();
        a + (-2.0 * a).exp().ln_1p() - LN_2
    }

    /// `tanh r = ν/μ`.
    pub fn tanh(self) -> f64 {
        self.0.tanh()
    }
}

impl TryFrom<f64> for SqueezeParameter {
    type Error = Error;
    fn try_from(r: f64) -> Result<Self> {
        Self::new(r)
    }
}

impl From<SqueezeParameter> for f64 {
    fn from(r: SqueezeParameter) -> f64 {
        r.0
    }
}

/// Bogoliubov coefficients `(μ, ν) = (cosh r, sinh r)`.
pub fn squeeze_factors(r: SqueezeParameter) -> (f64, f64) {
    (r.0.cosh(), r.0.sinh())
}

/// `exp(-(d²/2) e^{2r})` evaluated without forming `d² e^{2r}` directly.
fn gaussian_decay(d: f64, r: f64) -> f64 {
    if d == 0.0 {
        return 1.0;
    }
    // an overflowing e^{ln_arg} gives exp(-inf) = 0
    let ln_arg = 2.0 * d.abs().ln() + 2.0 * r - LN_2;
    (-ln_arg.exp()).exp()
}

/// `⟨α₁, r | α₂, r⟩ = exp(-(α₁ - α₂)² e^{2r} / 2)` for real amplitudes.
pub fn overlap_real_squeezed(a1: f64, a2: f64, r: SqueezeParameter) -> f64 {
    gaussian_decay(a1 - a2, r.0)
}

/// Position wavefunction `⟨x | α, r⟩ = (e^{2r}/π)^{1/4} exp(-(e^{2r}/2)(x - √2 α)²)`.
pub fn position_amplitude(x: f64, alpha: f64, r: SqueezeParameter) -> f64 {
    let prefactor = (0.5 * r.0 - 0.25 * PI.ln()).exp();
    prefactor * gaussian_decay(x - SQRT_2 * alpha, r.0)
}

/// Coherent-state projection `⟨β | α, r⟩` for real `α`.
///
/// With `t = tanh r`:
/// `μ^{-1/2} exp(-|β|²/2 - (1+t)α²/2 + (1+t) α β* - t β*²/2)`.
/// At `r = 0` this is the coherent overlap `exp(-|β|²/2 - α²/2 + β* α)`, and
/// `⟨0 | S(r) | 0⟩ = 1/√cosh r`. The form is pinned by the Fock-space oracle.
pub fn coherent_squeezed_overlap(beta: C64, alpha: f64, r: SqueezeParameter) -> C64 {
    let t = r.tanh();
    let bc = beta.conj();
    let exponent = -0.5 * beta.norm_sqr() - 0.5 * (1.0 + t) * alpha * alpha
        + (1.0 + t) * alpha * bc
        - 0.5 * t * bc * bc
        - 0.5 * r.ln_mu();
    if exponent.re < -745.0 {
        C64::new(0.0, 0.0)
    } else {
        exponent.exp()
    }
}

/// One displaced squeezed vacuum with a complex coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezedComponent {
    pub amplitude: f64,
    pub weight: C64,
}

impl SqueezedComponent {
    pub fn new(amplitude: f64, weight: C64) -> Self {
        Self { amplitude, weight }
    }

    pub fn real(amplitude: f64, weight: f64) -> Self {
        Self::new(amplitude, C64::new(weight, 0.0))
    }

    fn is_finite(&self) -> bool {
        self.amplitude.is_finite() && self.weight.re.is_finite() && self.weight.im.is_finite()
    }
}

/// `√(Σ_{j,m} w_j* w_m ⟨α_j, r | α_m, r⟩)`.
pub fn superposition_norm(components: &[SqueezedComponent], r: SqueezeParameter) -> Result<f64> {
    if components.is_empty() {
        return Err(Error::EmptySuperposition);
    }
    if let Some(k) = components.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFiniteComponent(k));
    }
    let diag: f64 = components.iter().map(|c| c.weight.norm_sqr()).sum();
    let mut off = 0.0;
    for (j, cj) in components.iter().enumerate() {
        let mut row = C64::new(0.0, 0.0);
        for cm in &components[j + 1..] {
            let o = overlap_real_squeezed(cj.amplitude, cm.amplitude, r);
            if o != 0.0 {
                row += cm.weight * o;
            }
        }
        off += (cj.weight.conj() * row).re;
    }
    let gram = diag + 2.0 * off;
    if gram.is_nan() || gram <= 1e-14 * diag {
        return Err(Error::DegenerateSuperposition(gram));
    }
    Ok(gram.sqrt())
}

/// Closed-form squared normalization of the equal-weight state on amplitudes
/// `±(2j+1)τ`, `j < 2^k`:
/// `2 Σ_{j,m} [exp(-2(j+m+1)² τ² e^{2r}) + exp(-2(j-m)² τ² e^{2r})]`.
///
/// This state has `2·2^k` components and is produced by `k + 1` dyadic pulses.
pub fn dyadic_norm_sq_closed_form(k: u32, tau: f64, r: SqueezeParameter) -> f64 {
    let n = 1usize << k;
    let mut sum = 0.0;
    for j in 0..n {
        for m in 0..n {
            // exp(-2 s² τ² e^{2r}) = gaussian_decay(2 s τ, r)
            let s_plus = (j + m + 1) as f64;
            let s_minus = j as f64 - m as f64;
            sum += gaussian_decay(2.0 * s_plus * tau, r.0) + gaussian_decay(2.0 * s_minus * tau, r.0);
        }
    }
    2.0 * sum
}

/// Normalized superposition `(1/N) Σ_j w_j |α_j, r⟩` sharing one squeeze parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionState {
    components: Vec<SqueezedComponent>,
    r: SqueezeParameter,
    norm_constant: f64,
}

impl SuperpositionState {
    pub fn new(components: Vec<SqueezedComponent>, r: SqueezeParameter) -> Result<Self> {
        let norm_constant = superposition_norm(&components, r)?;
        Ok(Self { components, r, norm_constant })
    }

    pub fn components(&self) -> &[SqueezedComponent] {
        &self.components
    }

    pub fn squeeze(&self) -> SqueezeParameter {
        self.r
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn max_abs_amplitude(&self) -> f64 {
        self.components.iter().map(|c| c.amplitude.abs()).fold(0.0, f64::max)
    }

    /// Normalized position wavefunction at `x`.
    pub fn wavefunction(&self, x: f64) -> C64 {
        let sum: C64 = self
            .components
            .iter()
            .map(|c| c.weight * position_amplitude(x, c.amplitude, self.r))
            .sum();
        sum / self.norm_constant
    }

    /// Normalized coherent-state projection `⟨β | ψ⟩`.
    pub fn coherent_projection(&self, beta: C64) -> C64 {
        let sum: C64 = self
            .components
            .iter()
            .map(|c| c.weight * coherent_squeezed_overlap(beta, c.amplitude, self.r))
            .sum();
        sum / self.norm_constant
    }
}
