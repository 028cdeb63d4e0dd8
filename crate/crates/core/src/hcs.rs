//! Hybrid coherent states `N[√ε e^{iθ}|α⟩ + √(1−ε) e^{iφ} a†|α⟩]` and the
//! closed forms for their statistics and Wigner function.
//!
//! The closed forms here are kept as inspectable cross-checks. Metrics never
//! consume them; they read moments off the Fock vector instead.

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    apply_creation, choose_cutoff, coherent_vector, expectation_normal_ordered, ComplexPoint, FockVector, TailPolicy,
    NORM_TOLERANCE,
};

/// Brackets at or below this make the state numerically meaningless.
const DEGENERATE_BRACKET: f64 = 1e-12;

/// Default tail tolerance used when a cutoff is picked automatically.
pub const AUTO_CUTOFF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HcsParams {
    pub epsilon: f64,
    pub theta: f64,
    pub phi: f64,
    pub alpha: ComplexPoint,
}

impl HcsParams {
    pub fn new(epsilon: f64, theta: f64, phi: f64, alpha: ComplexPoint) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::invalid(format!("epsilon {epsilon} outside [0, 1]")));
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::invalid("phases must be finite"));
        }
        Ok(Self { epsilon, theta, phi, alpha })
    }

    /// `α = r e^{iω}`.
    pub fn polar(epsilon: f64, theta: f64, phi: f64, r: f64, omega: f64) -> Result<Self> {
        Self::new(epsilon, theta, phi, ComplexPoint::from_polar(r, omega))
    }

    pub fn coherent(alpha: ComplexPoint) -> Self {
        Self { epsilon: 1.0, theta: 0.0, phi: 0.0, alpha }
    }

    pub fn photon_added(alpha: ComplexPoint) -> Self {
        Self { epsilon: 0.0, theta: 0.0, phi: 0.0, alpha }
    }

    pub fn with_alpha(self, alpha: ComplexPoint) -> Self {
        Self { alpha, ..self }
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Self::new(epsilon, self.theta, self.phi, self.alpha)
    }

    /// Unnormalized branch weights `(√ε e^{iθ}, √(1−ε) e^{iφ})`.
    pub fn branch_weights(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(self.epsilon.sqrt(), self.theta),
            Complex64::from_polar((1.0 - self.epsilon).sqrt(), self.phi),
        )
    }

    /// `√(ε−ε²)`, the interference strength.
    fn interference(&self) -> f64 {
        (self.epsilon - self.epsilon * self.epsilon).max(0.0).sqrt()
    }

    /// `Re[e^{i(θ−φ)} α]`.
    fn phase_overlap(&self) -> f64 {
        (Complex64::from_polar(1.0, self.theta - self.phi) * self.alpha.to_complex()).re
    }

    pub fn cutoff(&self) -> usize {
        choose_cutoff(self.alpha.norm(), AUTO_CUTOFF_TOL)
    }

    fn degenerate(&self, bracket: f64) -> Error {
        Error::DegenerateState {
            bracket,
            epsilon: self.epsilon,
            theta: self.theta,
            phi: self.phi,
            alpha_re: self.alpha.re,
            alpha_im: self.alpha.im,
        }
    }
}

/// Phase-space point together with the state it is evaluated for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerParams {
    pub params: HcsParams,
    pub z: ComplexPoint,
}

/// `2√(ε−ε²) Re[e^{i(θ−φ)}α] + (1−ε)|α|² + 1`.
pub fn normalization_bracket(params: &HcsParams) -> f64 {
    2.0 * params.interference() * params.phase_overlap() + (1.0 - params.epsilon) * params.alpha.norm_sqr() + 1.0
}

pub fn normalization_constant(params: &HcsParams) -> Result<f64> {
    let bracket = normalization_bracket(params);
    if bracket <= DEGENERATE_BRACKET {
        return Err(params.degenerate(bracket));
    }
    Ok(bracket.powf(-0.5))
}

/// `√ε e^{iθ}|α⟩ + √(1−ε) e^{iφ} a†|α⟩` on `|0⟩ … |cutoff⟩`, no normalization.
pub fn hcs_fock_unnormalized(params: &HcsParams, cutoff: usize, policy: TailPolicy) -> Result<FockVector> {
    if cutoff == 0 {
        return Err(Error::invalid("hybrid states need a cutoff of at least 1"));
    }
    let coherent = coherent_vector(params.alpha, cutoff - 1, policy)?;
    let added = apply_creation(&coherent, policy)?;
    let (c1, c2) = params.branch_weights();
    Ok(coherent.combine(c1, &added, c2))
}

/// The normalized hybrid state, scaled by the closed-form normalization constant.
///
/// A norm that misses 1 by more than the tolerance means the cutoff cut off
/// real probability: strict mode reports it, lenient mode renormalizes.
pub fn build_hcs_fock(params: &HcsParams, cutoff: usize, policy: TailPolicy) -> Result<FockVector> {
    let norm = normalization_constant(params)?;
    let state = hcs_fock_unnormalized(params, cutoff, policy)?.scaled(Complex64::new(norm, 0.0));
    let deficit = (state.norm_sqr() - 1.0).abs();
    if deficit > NORM_TOLERANCE {
        policy.check(cutoff, deficit, NORM_TOLERANCE)?;
        return state.normalized();
    }
    Ok(state)
}

/// [`build_hcs_fock`] at the automatic cutoff, strict tails.
pub fn build_hcs_auto(params: &HcsParams) -> Result<FockVector> {
    build_hcs_fock(params, params.cutoff(), TailPolicy::Strict)
}

/// `e^{−|α|²/2} αⁿ/√n!` for `n = 0..=n_max`, by recurrence.
fn coherent_coefficients(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut cur = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    out.push(cur);
    for n in 1..=n_max {
        cur = cur * alpha / (n as f64).sqrt();
        out.push(cur);
    }
    out
}

/// `P_0 … P_{n_max}` from the closed-form amplitude.
pub fn photon_distribution(params: &HcsParams, n_max: usize) -> Result<Vec<f64>> {
    let norm = normalization_constant(params)?;
    let (c1, c2) = params.branch_weights();
    let g = coherent_coefficients(params.alpha.to_complex(), n_max);
    Ok((0..=n_max)
        .map(|n| {
            // √(n/(n−1)!) α^{n−1} e^{−|α|²/2} = √n · g_{n−1}; the added branch has no vacuum term
            let added = if n == 0 { Complex64::new(0.0, 0.0) } else { g[n - 1] * (n as f64).sqrt() };
            (norm * (c1 * g[n] + c2 * added)).norm_sqr()
        })
        .collect())
}

pub fn photon_probability(params: &HcsParams, n: usize) -> Result<f64> {
    Ok(photon_distribution(params, n)?[n])
}

/// Closed-form `⟨a†a⟩`.
pub fn mean_n_closed(params: &HcsParams) -> Result<f64> {
    let n2 = normalization_constant(params)?.powi(2);
    let eps = params.epsilon;
    let a2 = params.alpha.norm_sqr();
    Ok(n2
        * ((3.0 - 2.0 * eps) * a2 + (1.0 - eps) * a2 * a2 - eps
            + 1.0
            + 2.0 * params.interference() * (1.0 + a2) * params.phase_overlap()))
}

/// Which route [`adag2a2_closed`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Adag2a2Variant {
    /// The published closed form, cross term `2|α|²√(ε−ε²)(2+|α|⁴)Re[e^{i(θ−φ)}α]`.
    AsPrinted,
    /// `⟨a†²a²⟩` read off the Fock vector.
    OracleValidated,
}

pub fn adag2a2_closed(params: &HcsParams, variant: Adag2a2Variant) -> Result<f64> {
    match variant {
        Adag2a2Variant::AsPrinted => {
            let a2 = params.alpha.norm_sqr();
            Ok(adag2a2_with_cross_factor(params, 2.0 + a2 * a2)?)
        }
        Adag2a2Variant::OracleValidated => {
            let state = build_hcs_auto(params)?;
            Ok(expectation_normal_ordered(&state, 2, 2, TailPolicy::Strict)?.re)
        }
    }
}

/// Closed form of `⟨a†²a²⟩` with the cross-term factor `2+|α|²` obtained from
/// `⟨α|a†²a²a†|α⟩ = ᾱ|α|²(|α|²+2)`.
pub fn adag2a2_rederived(params: &HcsParams) -> Result<f64> {
    adag2a2_with_cross_factor(params, 2.0 + params.alpha.norm_sqr())
}

fn adag2a2_with_cross_factor(params: &HcsParams, factor: f64) -> Result<f64> {
    let n2 = normalization_constant(params)?.powi(2);
    let eps = params.epsilon;
    let a2 = params.alpha.norm_sqr();
    Ok(n2
        * ((4.0 - 4.0 * eps) * a2
            + (5.0 - 4.0 * eps) * a2 * a2
            + (1.0 - eps) * a2 * a2 * a2
            + 2.0 * a2 * params.interference() * factor * params.phase_overlap()))
}

/// Closed-form Wigner function of the hybrid state.
pub fn wigner_closed(params: &HcsParams, z: ComplexPoint) -> Result<f64> {
    let n2 = normalization_constant(params)?.powi(2);
    let eps = params.epsilon;
    let alpha = params.alpha.to_complex();
    let zc = z.to_complex();
    let w1 = (Complex64::from_polar(1.0, params.theta - params.phi) * (alpha - 2.0 * zc)).re;
    let envelope = (-2.0 * (alpha - zc).norm_sqr()).exp();
    let bracket = eps - 2.0 * params.interference() * w1 - (1.0 - eps) * (1.0 - (2.0 * zc - alpha).norm_sqr());
    Ok(FRAC_2_PI * n2 * envelope * bracket)
}

/// Wigner function of the photon-added coherent state `a†|α⟩/√(1+|α|²)`.
pub fn wigner_spac(alpha: ComplexPoint, z: ComplexPoint) -> f64 {
    let a = alpha.to_complex();
    let zc = z.to_complex();
    -FRAC_2_PI * (1.0 - (2.0 * zc - a).norm_sqr()) / (1.0 + a.norm_sqr()) * (-2.0 * (zc - a).norm_sqr()).exp()
}

/// Wigner function of the coherent state `|α⟩`.
pub fn wigner_coherent(alpha: ComplexPoint, z: ComplexPoint) -> f64 {
    FRAC_2_PI * (-2.0 * (z.to_complex() - alpha.to_complex()).norm_sqr()).exp()
}

/// Reads `(ε, θ, φ)` off an unnormalized `c1|α⟩ + c2 a†|α⟩`.
pub fn hcs_params_from_amplitudes(c1: Complex64, c2: Complex64, alpha: ComplexPoint) -> Result<HcsParams> {
    let w1 = c1.norm_sqr();
    let w2 = c2.norm_sqr();
    if w1 + w2 == 0.0 {
        return Err(Error::BothZero);
    }
    let arg = |c: Complex64| if c == Complex64::new(0.0, 0.0) { 0.0 } else { c.arg() };
    HcsParams::new(w1 / (w1 + w2), arg(c1), arg(c2), alpha)
}

/// Least-squares decomposition of `state` onto `span{|α⟩, a†|α⟩}` on the
/// state's own basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanProjection {
    pub coherent: Complex64,
    pub photon_added: Complex64,
    /// Norm of the component orthogonal to the span.
    pub residual: f64,
}

pub fn project_onto_hcs_span(state: &FockVector, alpha: ComplexPoint) -> Result<SpanProjection> {
    let cutoff = state.cutoff();
    if cutoff == 0 {
        return Err(Error::invalid("projection needs a cutoff of at least 1"));
    }
    let v1 = coherent_vector(alpha, cutoff, TailPolicy::Lenient)?;
    let v2 = apply_creation(&coherent_vector(alpha, cutoff - 1, TailPolicy::Lenient)?, TailPolicy::Lenient)?;

    // normal equations G c = b with the Gram matrix of (v1, v2)
    let g11 = v1.norm_sqr();
    let g22 = v2.norm_sqr();
    let g12 = v1.inner(&v2);
    let b1 = v1.inner(state);
    let b2 = v2.inner(state);
    let det = g11 * g22 - g12.norm_sqr();
    if det <= 0.0 {
        return Err(Error::invalid("coherent and photon-added vectors are not independent"));
    }
    let c1 = (b1 * g22 - g12 * b2) / det;
    let c2 = (b2 * g11 - g12.conj() * b1) / det;
    let fit = v1.combine(c1, &v2, c2);
    let residual = state.combine(Complex64::new(1.0, 0.0), &fit, Complex64::new(-1.0, 0.0)).norm_sqr().sqrt();
    Ok(SpanProjection { coherent: c1, photon_added: c2, residual })
}
