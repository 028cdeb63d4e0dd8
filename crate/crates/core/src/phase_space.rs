//! Brute-force Wigner evaluation on the truncated basis.
//!
//! Two routes that share no code beyond the Fock vector itself:
//! the displaced-parity sum [`wigner_point_oracle`] and numerical Fourier
//! quadrature of the normally ordered characteristic function
//! [`wigner_via_characteristic`].

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::displacement::displace;
use crate::error::{Error, Result};
use crate::fock::{choose_cutoff, ComplexPoint, FockVector, TailPolicy};

/// Amplitudes below this probability are treated as outside the state's support.
const SUPPORT_THRESHOLD: f64 = 1e-32;

/// Rows needed so that `D(z)` applied to levels `0..=support` stays inside the basis.
fn oracle_rows(support: usize, z: ComplexPoint) -> usize {
    let spread = z.norm() + (support as f64).sqrt();
    let by_poisson = choose_cutoff(spread, 1e-16);
    let by_guard = (4.0 * z.norm_sqr()).ceil() as usize;
    by_poisson.max(by_guard).max(support)
}

/// `W(z) = (2/π) Σₙ (−1)ⁿ |⟨n|D(−z)|ψ⟩|²`.
pub fn wigner_point_oracle(state: &FockVector, z: ComplexPoint, policy: TailPolicy) -> Result<f64> {
    state.require_normalized()?;
    state.check_tail(policy)?;
    let support = state.support(SUPPORT_THRESHOLD);
    let shift = ComplexPoint::new(-z.re, -z.im);
    let rows = oracle_rows(support, shift);
    let displaced = displace(state, shift, rows, support);
    let parity: f64 =
        displaced.iter().enumerate().map(|(n, b)| if n % 2 == 0 { b.norm_sqr() } else { -b.norm_sqr() }).sum();
    Ok(FRAC_2_PI * parity)
}

/// `Σ_k βᵏ/k! aᵏ|ψ⟩`, exact on the truncated basis.
fn exp_annihilation(state: &FockVector, beta: Complex64) -> Result<Vec<Complex64>> {
    let amps = state.amplitudes();
    let top = state.cutoff();
    let mut term: Vec<Complex64> = amps.to_vec();
    let mut sum = term.clone();
    let mut peak = state.norm_sqr().sqrt();
    let mut last = peak;
    let growth = beta.norm() * (top as f64).sqrt();

    for k in 1..=top {
        let len = top + 1 - k;
        for n in 0..len {
            term[n] = term[n + 1] * ((n + 1) as f64).sqrt() * beta / k as f64;
        }
        term.truncate(len);
        let norm = term.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
        if !norm.is_finite() {
            return Err(Error::SeriesNotConverged { lambda_abs: beta.norm(), last_term: norm });
        }
        peak = peak.max(norm);
        last = norm;
        // ‖a v‖ ≤ √N‖v‖, so once the ratio bound drops below 1/2 the rest is a geometric tail
        if growth / ((k + 1) as f64) < 0.5 && norm < 1e-20 * peak {
            last = 0.0;
            break;
        }
    }
    if last > 1e-12 * peak.max(1.0) {
        return Err(Error::SeriesNotConverged { lambda_abs: beta.norm(), last_term: last });
    }
    Ok(sum)
}

/// `C_N(λ) = Tr[ρ e^{λa†} e^{−λ̄a}] = ⟨e^{λ̄a}ψ | e^{−λ̄a}ψ⟩`.
pub fn characteristic_function_n(state: &FockVector, lambda: ComplexPoint) -> Result<Complex64> {
    state.require_normalized()?;
    let lam = lambda.to_complex();
    let left = exp_annihilation(state, lam.conj())?;
    let right = exp_annihilation(state, -lam.conj())?;
    Ok(left.iter().zip(&right).map(|(u, v)| u.conj() * v).sum())
}

/// Trapezoidal grid for [`wigner_via_characteristic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierQuadrature {
    /// The grid covers `[−half_width, half_width]²` in `λ`.
    pub half_width: f64,
    pub step: f64,
}

impl Default for FourierQuadrature {
    fn default() -> Self {
        // e^{−|λ|²/2} < 1e−15 beyond 8.4; step resolves frequencies up to ~20
        Self { half_width: 8.4, step: 0.2 }
    }
}

/// `W(z) = π⁻² ∫ e^{λ̄z − λz̄} C_N(λ) e^{−|λ|²/2} d²λ` by trapezoidal quadrature.
///
/// The state's cutoff must be generous enough for `C_N` to converge over the
/// whole quadrature box, otherwise [`Error::SeriesNotConverged`] is returned.
pub fn wigner_via_characteristic(state: &FockVector, z: ComplexPoint, quad: FourierQuadrature) -> Result<f64> {
    let steps = (quad.half_width / quad.step).round() as i64;
    let zc = z.to_complex();
    let mut acc = 0.0;
    // C_N(−λ) = C_N(λ)*, so the integrand is Hermitian: sum the upper half plane, double the real part.
    for iv in 0..=steps {
        let v = iv as f64 * quad.step;
        let row_weight = if iv == 0 { 1.0 } else { 2.0 };
        for iu in -steps..=steps {
            if iv == 0 && iu < 0 {
                continue;
            }
            let u = iu as f64 * quad.step;
            let lam = Complex64::new(u, v);
            let weight = if iv == 0 && iu > 0 { 2.0 } else { row_weight };
            let gauss = (-0.5 * lam.norm_sqr()).exp();
            let kernel = (lam.conj() * zc - lam * zc.conj()).exp();
            let c = characteristic_function_n(state, ComplexPoint::new(u, v))?;
            acc += weight * (kernel * c).re * gauss;
        }
    }
    Ok(acc * quad.step * quad.step / (PI * PI))
}
