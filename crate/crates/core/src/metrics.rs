//! Nonclassicality quantifiers for arbitrary single-mode pure states.
//!
//! Every quantity is a function of a [`MomentSet`] read off the Fock vector;
//! the `*_from_moments` variants let callers extract moments once (and pick
//! their own tail policy) and evaluate several metrics from them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockVector, MomentSet, TailPolicy};

/// Below this mean photon number the Mandel factor is undefined.
const VACUUM_MEAN_N: f64 = 1e-12;

/// Quadrature angle of `X_φ = (a e^{−iφ} + a† e^{iφ})/√2`, reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    phi_quad: f64,
}

impl QuadratureSpec {
    pub fn new(phi_quad: f64) -> Self {
        Self { phi_quad: phi_quad.rem_euclid(TAU) }
    }

    pub fn angle(&self) -> f64 {
        self.phi_quad
    }
}

fn moments(state: &FockVector) -> Result<MomentSet> {
    MomentSet::from_state(state, TailPolicy::Strict)
}

/// `Q = (⟨a†²a²⟩ − ⟨a†a⟩²)/⟨a†a⟩`.
pub fn mandel_q(state: &FockVector) -> Result<f64> {
    mandel_q_from_moments(&moments(state)?)
}

pub fn mandel_q_from_moments(m: &MomentSet) -> Result<f64> {
    if m.mean_n <= VACUUM_MEAN_N {
        return Err(Error::VacuumState { mean_n: m.mean_n });
    }
    Ok((m.mean_adag2a2 - m.mean_n * m.mean_n) / m.mean_n)
}

/// Wigner–Yanase skew information of a pure state, `1/2 + ⟨a†a⟩ − |⟨a⟩|²`.
pub fn skew_information(state: &FockVector) -> Result<f64> {
    Ok(skew_information_from_moments(&moments(state)?))
}

pub fn skew_information_from_moments(m: &MomentSet) -> f64 {
    0.5 + m.mean_n - m.mean_a.norm_sqr()
}

/// `S_φ = (ΔX_φ)² − 1/2`.
pub fn quadrature_squeezing(state: &FockVector, spec: QuadratureSpec) -> Result<f64> {
    Ok(quadrature_squeezing_from_moments(&moments(state)?, spec))
}

pub fn quadrature_squeezing_from_moments(m: &MomentSet, spec: QuadratureSpec) -> f64 {
    // ⟨X²⟩ − 1/2 = Re(⟨a²⟩e^{−2iφ}) + ⟨a†a⟩,  ⟨X⟩ = √2 Re(⟨a⟩e^{−iφ})
    let rot = Complex64::from_polar(1.0, -spec.angle());
    let mean_x = (m.mean_a * rot).re;
    (m.mean_a2 * rot * rot).re + m.mean_n - 2.0 * mean_x * mean_x
}

/// Scans `φ = kπ/n_angles`, `k = 0 … n_angles−1` (`S_φ` has period π) and
/// returns the most squeezed `(angle, value)`.
pub fn quadrature_min_scan(state: &FockVector, n_angles: usize) -> Result<(f64, f64)> {
    if n_angles < 4 {
        return Err(Error::invalid(format!("need at least 4 angles, got {n_angles}")));
    }
    let m = moments(state)?;
    Ok((0..n_angles)
        .map(|k| {
            let angle = k as f64 * PI / n_angles as f64;
            (angle, quadrature_squeezing_from_moments(&m, QuadratureSpec::new(angle)))
        })
        .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best }))
}

/// Exact minimizer: `2φ* = arg(⟨a²⟩ − ⟨a⟩²) + π`, value `⟨a†a⟩ − |⟨a⟩|² − |⟨a²⟩ − ⟨a⟩²|`.
pub fn quadrature_min_exact(m: &MomentSet) -> (f64, f64) {
    let c = m.mean_a2 - m.mean_a * m.mean_a;
    let angle = ((c.arg() + PI) / 2.0).rem_euclid(PI);
    (angle, m.mean_n - m.mean_a.norm_sqr() - c.norm())
}

/// `Y_min = ⟨a†²a²⟩ − |⟨a²⟩|² − |⟨a⁴⟩ − ⟨a²⟩²|`.
pub fn as_squeezing_ymin(state: &FockVector) -> Result<f64> {
    Ok(as_squeezing_ymin_from_moments(&moments(state)?))
}

pub fn as_squeezing_ymin_from_moments(m: &MomentSet) -> f64 {
    m.mean_adag2a2 - m.mean_a2.norm_sqr() - (m.mean_a4 - m.mean_a2 * m.mean_a2).norm()
}

/// `S_ass = Y_min / (2⟨a†a + 1/2⟩)`; amplitude-squared squeezing when `−1 ≤ S_ass < 0`.
pub fn s_ass(state: &FockVector) -> Result<f64> {
    Ok(s_ass_from_moments(&moments(state)?))
}

pub fn s_ass_from_moments(m: &MomentSet) -> f64 {
    0.5 * as_squeezing_ymin_from_moments(m) / (m.mean_n + 0.5)
}

/// Variances of `Y₁ = (a†² + a²)/2` and `Y₂ = i(a†² − a²)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSquaredVariances {
    pub var_y1: f64,
    pub var_y2: f64,
    /// `⟨N + 1/2⟩`, the uncertainty floor for `ΔY₁ΔY₂`.
    pub floor: f64,
}

pub fn as_variances(m: &MomentSet) -> AmplitudeSquaredVariances {
    // Var(Y_ϑ) = [Re((⟨a⁴⟩−⟨a²⟩²)e^{−2iϑ}) + ⟨a†²a²⟩ − |⟨a²⟩|²]/2 + ⟨a†a⟩ + 1/2
    let c = m.mean_a4 - m.mean_a2 * m.mean_a2;
    let base = m.mean_adag2a2 - m.mean_a2.norm_sqr();
    let floor = m.mean_n + 0.5;
    AmplitudeSquaredVariances { var_y1: 0.5 * (base + c.re) + floor, var_y2: 0.5 * (base - c.re) + floor, floor }
}

/// All scalar metrics of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mandel_q: Option<f64>,
    pub skew: f64,
    pub s_phi0: f64,
    pub s_phi_half_pi: f64,
    pub s_min: f64,
    pub y_min: f64,
    pub s_ass: f64,
}

impl MetricSummary {
    pub fn from_moments(m: &MomentSet) -> Self {
        Self {
            mandel_q: mandel_q_from_moments(m).ok(),
            skew: skew_information_from_moments(m),
            s_phi0: quadrature_squeezing_from_moments(m, QuadratureSpec::new(0.0)),
            s_phi_half_pi: quadrature_squeezing_from_moments(m, QuadratureSpec::new(PI / 2.0)),
            s_min: quadrature_min_exact(m).1,
            y_min: as_squeezing_ymin_from_moments(m),
            s_ass: s_ass_from_moments(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_vector, ComplexPoint};
    use crate::hcs::{build_hcs_auto, HcsParams};

    fn coherent(re: f64, im: f64) -> FockVector {
        coherent_vector(ComplexPoint::new(re, im), 50, TailPolicy::Strict).unwrap()
    }

    fn displaced_photon() -> FockVector {
        build_hcs_auto(&HcsParams::new(0.5, PI, 0.0, ComplexPoint::real(1.0)).unwrap()).unwrap()
    }

    #[test]
    fn mandel_examples() {
        let one = FockVector::number_state(1, 10);
        assert!((mandel_q(&one).unwrap() + 1.0).abs() < 1e-15);
        assert!(mandel_q(&coherent(1.3, 0.4)).unwrap().abs() < 1e-12);
        assert!((mandel_q(&displaced_photon()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mandel_refuses_vacuum() {
        assert!(matches!(mandel_q(&FockVector::vacuum(8)), Err(Error::VacuumState { .. })));
    }

    #[test]
    fn skew_examples() {
        assert!((skew_information(&coherent(-0.7, 1.9)).unwrap() - 0.5).abs() < 1e-12);
        assert!((skew_information(&FockVector::number_state(1, 10)).unwrap() - 1.5).abs() < 1e-15);
        assert!((skew_information(&displaced_photon()).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn quadrature_examples() {
        for phi in [0.0, 0.4, PI / 2.0, 2.5] {
            let spec = QuadratureSpec::new(phi);
            assert!(quadrature_squeezing(&coherent(1.1, -0.6), spec).unwrap().abs() < 1e-12);
            let one = FockVector::number_state(1, 10);
            assert!((quadrature_squeezing(&one, spec).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn quadrature_spec_reduces_angle() {
        assert!((QuadratureSpec::new(-PI / 2.0).angle() - 1.5 * PI).abs() < 1e-15);
        assert!((QuadratureSpec::new(5.0 * PI).angle() - PI).abs() < 1e-12);
    }

    #[test]
    fn scan_examples() {
        let (_, v) = quadrature_min_scan(&coherent(2.0, 0.0), 16).unwrap();
        assert!(v.abs() < 1e-12);
        let (_, v) = quadrature_min_scan(&FockVector::number_state(1, 8), 16).unwrap();
        assert!((v - 1.0).abs() < 1e-15);

        let p = HcsParams::new(0.75, 0.0, 0.0, ComplexPoint::real(1.5)).unwrap();
        let state = build_hcs_auto(&p).unwrap();
        let n = 64;
        let (angle, _) = quadrature_min_scan(&state, n).unwrap();
        let step = PI / n as f64;
        assert!(angle <= step || (PI - angle) <= step, "angle {angle}");
        assert!(quadrature_min_scan(&state, 3).is_err());
    }

    #[test]
    fn scan_agrees_with_exact_minimizer() {
        let p = HcsParams::new(0.4, 0.7, -1.2, ComplexPoint::new(0.9, 0.8)).unwrap();
        let state = build_hcs_auto(&p).unwrap();
        let m = MomentSet::from_state(&state, TailPolicy::Strict).unwrap();
        let (angle, value) = quadrature_min_exact(&m);
        let n = 720;
        let (scan_angle, scan_value) = quadrature_min_scan(&state, n).unwrap();
        let step = PI / n as f64;
        let gap = (angle - scan_angle).abs();
        assert!(gap.min(PI - gap) <= step);
        assert!(value <= scan_value + 1e-15 && scan_value - value < 1e-4);
    }

    #[test]
    fn as_squeezing_vanishes_for_coherent_and_fock() {
        let coh = coherent(1.4, 0.9);
        assert!(as_squeezing_ymin(&coh).unwrap().abs() < 1e-10);
        assert!(s_ass(&coh).unwrap().abs() < 1e-10);
        let one = FockVector::number_state(1, 8);
        assert_eq!(as_squeezing_ymin(&one).unwrap(), 0.0);
        assert_eq!(s_ass(&one).unwrap(), 0.0);
    }

    #[test]
    fn balanced_state_is_as_squeezed_at_alpha_two() {
        let p = HcsParams::new(0.5, 0.0, 0.0, ComplexPoint::real(2.0)).unwrap();
        let state = build_hcs_auto(&p).unwrap();
        assert!(as_squeezing_ymin(&state).unwrap() < 0.0);
        let s = s_ass(&state).unwrap();
        assert!((-1.0..0.0).contains(&s), "{s}");
    }

    #[test]
    fn uncertainty_floor_for_single_photon() {
        let m = MomentSet::from_state(&FockVector::number_state(1, 8), TailPolicy::Strict).unwrap();
        let v = as_variances(&m);
        assert!((v.floor - 1.5).abs() < 1e-15);
        assert!(v.var_y1.sqrt() * v.var_y2.sqrt() >= v.floor - 1e-12);
    }
}
