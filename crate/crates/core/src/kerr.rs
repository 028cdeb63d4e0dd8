//! Heralded preparation of hybrid coherent states with a cross-Kerr coupling.
//!
//! A single photon is split over modes `b` and `c`, mode `b` picks up a phase
//! `θ_ps`, couples to the signal through `exp(−iφ₀ n_a n_b)`, and the two photon
//! modes are recombined on a variable beam splitter before detection at D1.
//! The photon always occupies exactly one of `b`, `c`, so the joint state is
//! two signal vectors, one per photon branch.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{apply_number, choose_cutoff, coherent_vector, ComplexPoint, FockVector, MomentSet, TailPolicy};
use crate::hcs::{build_hcs_fock, hcs_params_from_amplitudes, project_onto_hcs_span, HcsParams, SpanProjection};
use crate::metrics::{mandel_q_from_moments, quadrature_squeezing_from_moments, s_ass_from_moments, QuadratureSpec};
use crate::wigner::{negativity_report, wigner_grid, GridBounds, WignerMethod, WignerSource};

/// Heralds with probability at or below this count as failures.
pub const HERALD_FLOOR: f64 = 1e-14;

/// `|φ₀|(|α|² + |α|)` above which the linearized evolution is flagged.
pub const FIRST_ORDER_GUARD: f64 = 0.1;

const KERR_CUTOFF_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrSchemeParams {
    pub alpha: ComplexPoint,
    pub phi0: f64,
    pub theta_ps: f64,
    pub transmissivity: f64,
    pub cutoff: usize,
}

impl KerrSchemeParams {
    /// Picks a cutoff that holds `|α⟩` and `n̂|α⟩` to well below the tail tolerance.
    pub fn new(alpha: ComplexPoint, phi0: f64, theta_ps: f64, transmissivity: f64) -> Result<Self> {
        let cutoff = choose_cutoff(alpha.norm(), KERR_CUTOFF_TOL) + 4;
        Self { alpha, phi0, theta_ps, transmissivity, cutoff }.validated()
    }

    pub fn with_cutoff(self, cutoff: usize) -> Result<Self> {
        Self { cutoff, ..self }.validated()
    }

    pub fn with_transmissivity(self, t: f64) -> Result<Self> {
        Self { transmissivity: t, ..self }.validated()
    }

    pub fn with_phi0(self, phi0: f64) -> Result<Self> {
        Self { phi0, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        check_transmissivity(self.transmissivity)?;
        if !self.phi0.is_finite() || !self.theta_ps.is_finite() {
            return Err(Error::invalid("phi0 and theta_ps must be finite"));
        }
        if self.cutoff < 2 {
            return Err(Error::invalid("Kerr simulation needs a cutoff of at least 2"));
        }
        Ok(self)
    }

    pub fn reflectivity(&self) -> f64 {
        reflectivity(self.transmissivity)
    }
}

fn check_transmissivity(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::invalid(format!("transmissivity {t} outside [0, 1]")))
    }
}

/// `r = √(1 − t²)`.
pub fn reflectivity(t: f64) -> f64 {
    (1.0 - t * t).max(0.0).sqrt()
}

/// Signal vectors paired with the photon in mode `b` (`|1,0⟩`) and mode `c` (`|0,1⟩`).
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub branch_10: FockVector,
    pub branch_01: FockVector,
    pub alpha: ComplexPoint,
}

impl JointState {
    pub fn norm_sqr(&self) -> f64 {
        self.branch_10.norm_sqr() + self.branch_01.norm_sqr()
    }

    pub fn cutoff(&self) -> usize {
        self.branch_10.cutoff()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { branch_10: self.branch_10.scaled(c), branch_01: self.branch_01.scaled(c), alpha: self.alpha }
    }
}

/// `(e^{iθ}|1,0⟩ + i|0,1⟩)/√2 ⊗ |α⟩`.
pub fn initial_joint_state(params: &KerrSchemeParams) -> Result<JointState> {
    let coh = coherent_vector(params.alpha, params.cutoff, TailPolicy::Strict)?;
    Ok(JointState {
        branch_10: coh.scaled(Complex64::from_polar(FRAC_1_SQRT_2, params.theta_ps)),
        branch_01: coh.scaled(Complex64::new(0.0, FRAC_1_SQRT_2)),
        alpha: params.alpha,
    })
}

pub fn kerr_evolve_exact(state: &JointState, phi0: f64) -> JointState {
    let amps = state
        .branch_10
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -phi0 * n as f64))
        .collect();
    JointState {
        branch_10: FockVector::from_amplitudes(amps).expect("same length as input"),
        branch_01: state.branch_01.clone(),
        alpha: state.alpha,
    }
}

/// `(1 − iφ₀n̂)` on the `|1,0⟩` branch. The result carries an `O(φ₀²)` norm excess.
pub fn kerr_evolve_first_order(state: &JointState, phi0: f64) -> JointState {
    let a = state.alpha.norm();
    let validity = phi0.abs() * (a * a + a);
    if validity >= FIRST_ORDER_GUARD {
        log::warn!("first-order Kerr evolution outside its validity range: |φ₀|(|α|²+|α|) = {validity:.3}");
    }
    first_order_map(state, phi0)
}

/// The first-order map without the validity check; the audit compares it
/// algebraically and does not need the expansion to be accurate.
pub(crate) fn first_order_map(state: &JointState, phi0: f64) -> JointState {
    let n_psi = apply_number(&state.branch_10);
    JointState {
        branch_10: state.branch_10.combine(Complex64::new(1.0, 0.0), &n_psi, Complex64::new(0.0, -phi0)),
        branch_01: state.branch_01.clone(),
        alpha: state.alpha,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeraldedResult {
    pub signal_unnormalized: FockVector,
    pub success_probability: f64,
    pub signal_normalized: FockVector,
    pub fitted: HcsParams,
    /// `|⟨fit|signal⟩|²`.
    pub fidelity_to_fit: f64,
    /// Decomposition of the unnormalized signal onto `span{|α⟩, a†|α⟩}`.
    pub projection: SpanProjection,
}

/// Projects the photon pair onto `t|1,0⟩ + r|0,1⟩`, the click at D1.
pub fn postselect_d1(state: &JointState, t: f64) -> Result<HeraldedResult> {
    check_transmissivity(t)?;
    let r = reflectivity(t);
    let signal = state.branch_10.combine(Complex64::new(t, 0.0), &state.branch_01, Complex64::new(r, 0.0));
    herald(signal, state.alpha)
}

/// The signal left behind when the photon goes to the other detector: projection onto `r|1,0⟩ − t|0,1⟩`.
pub fn postselect_complement(state: &JointState, t: f64) -> Result<(FockVector, f64)> {
    check_transmissivity(t)?;
    let r = reflectivity(t);
    let signal = state.branch_10.combine(Complex64::new(r, 0.0), &state.branch_01, Complex64::new(-t, 0.0));
    let p = signal.norm_sqr();
    Ok((signal, p))
}

fn herald(signal: FockVector, alpha: ComplexPoint) -> Result<HeraldedResult> {
    let probability = signal.norm_sqr();
    if probability <= HERALD_FLOOR {
        return Err(Error::HeraldFailed { probability });
    }
    let normalized = signal.scaled(Complex64::new(probability.sqrt().recip(), 0.0));
    let projection = project_onto_hcs_span(&signal, alpha)?;
    let fitted = hcs_params_from_amplitudes(projection.coherent, projection.photon_added, alpha)?;
    let fit_state = build_hcs_fock(&fitted, signal.cutoff(), TailPolicy::Lenient)?;
    let fidelity = fit_state.inner(&normalized).norm_sqr().min(1.0);
    Ok(HeraldedResult {
        signal_unnormalized: signal,
        success_probability: probability,
        signal_normalized: normalized,
        fitted,
        fidelity_to_fit: fidelity,
        projection,
    })
}

/// `⟨ψ_f| b†b |ψ_i′⟩` with `ψ_f = t|1,0⟩ + r|0,1⟩` and `ψ_i′ = (e^{iθ}|1,0⟩ + i|0,1⟩)/√2`.
pub fn weak_matrix_element_nb(theta_ps: f64, t: f64) -> Result<Complex64> {
    check_transmissivity(t)?;
    let r = reflectivity(t);
    // (bra amplitude, ket amplitude, n_b) per branch
    let branches =
        [(t, Complex64::from_polar(FRAC_1_SQRT_2, theta_ps), 1.0), (r, Complex64::new(0.0, FRAC_1_SQRT_2), 0.0)];
    Ok(branches.iter().map(|&(bra, ket, nb)| ket * bra * nb).sum())
}

/// `(c₁, c₂)` of the linearized heralded signal `c₁|α⟩ + c₂a†|α⟩`:
/// `c₁ = (t e^{iθ} + i r)/√2`, `c₂ = −i t φ₀ α e^{iθ}/√2`.
pub fn first_order_amplitudes(params: &KerrSchemeParams) -> (Complex64, Complex64) {
    let t = params.transmissivity;
    let r = params.reflectivity();
    let phase = Complex64::from_polar(1.0, params.theta_ps);
    let c1 = (phase * t + Complex64::new(0.0, r)) * FRAC_1_SQRT_2;
    let c2 = Complex64::new(0.0, -1.0) * phase * t * params.phi0 * params.alpha.to_complex() * FRAC_1_SQRT_2;
    (c1, c2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Evolution {
    #[default]
    Exact,
    FirstOrder,
}

/// Full pipeline for one parameter set.
pub fn simulate(params: &KerrSchemeParams, evolution: Evolution) -> Result<HeraldedResult> {
    let initial = initial_joint_state(params)?;
    let evolved = match evolution {
        Evolution::Exact => kerr_evolve_exact(&initial, params.phi0),
        Evolution::FirstOrder => kerr_evolve_first_order(&initial, params.phi0),
    };
    postselect_d1(&evolved, params.transmissivity)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub evolution: Evolution,
    /// Half width and node count of the square Wigner grid used for the
    /// negative volume; `None` skips it.
    pub negativity_grid: Option<(f64, usize)>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { evolution: Evolution::Exact, negativity_grid: Some((4.0, 81)) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepMetrics {
    pub epsilon_fit: f64,
    pub success_prob: f64,
    pub fidelity: f64,
    pub mandel_q: Option<f64>,
    pub s_phi0: f64,
    pub s_ass: f64,
    pub neg_volume: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub outcome: Result<SweepMetrics>,
}

/// One row per transmissivity, evaluated in parallel; failed heralds stay in the table as errors.
pub fn transmissivity_sweep(
    params: &KerrSchemeParams,
    t_values: &[f64],
    options: SweepOptions,
) -> Result<Vec<SweepRow>> {
    for &t in t_values {
        check_transmissivity(t)?;
    }
    Ok(t_values.par_iter().map(|&t| SweepRow { t, outcome: sweep_point(params, t, options) }).collect())
}

fn sweep_point(params: &KerrSchemeParams, t: f64, options: SweepOptions) -> Result<SweepMetrics> {
    let p = params.with_transmissivity(t)?;
    let heralded = simulate(&p, options.evolution)?;
    let state = &heralded.signal_normalized;
    let m = MomentSet::from_state(state, TailPolicy::Lenient)?;
    let neg_volume = match options.negativity_grid {
        Some((half_width, n)) => {
            let bounds = GridBounds::centered(p.alpha, half_width, n)?;
            let grid =
                wigner_grid(WignerSource::State(state), bounds, WignerMethod::ParityOracle, TailPolicy::Lenient)?;
            Some(negativity_report(&grid).negative_volume)
        }
        None => None,
    };
    Ok(SweepMetrics {
        epsilon_fit: heralded.fitted.epsilon,
        success_prob: heralded.success_probability,
        fidelity: heralded.fidelity_to_fit,
        mandel_q: mandel_q_from_moments(&m).ok(),
        s_phi0: quadrature_squeezing_from_moments(&m, QuadratureSpec::new(0.0)),
        s_ass: s_ass_from_moments(&m),
        neg_volume,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params(phi0: f64, theta: f64, t: f64) -> KerrSchemeParams {
        KerrSchemeParams::new(ComplexPoint::real(1.0), phi0, theta, t).unwrap()
    }

    #[test]
    fn initial_branches() {
        let s = initial_joint_state(&params(0.0, 0.0, 0.5)).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((s.branch_10.amplitude(0).re - FRAC_1_SQRT_2 * (-0.5f64).exp()).abs() < 1e-15);
        let s = initial_joint_state(&params(0.0, -FRAC_PI_2, 0.5)).unwrap();
        let c = s.branch_10.amplitude(0) / (-0.5f64).exp();
        assert!((c - Complex64::new(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.branch_01.amplitude(0) / (-0.5f64).exp() - Complex64::new(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_transmissivity() {
        assert!(KerrSchemeParams::new(ComplexPoint::ORIGIN, 0.0, 0.0, 1.2).is_err());
        assert!(weak_matrix_element_nb(0.0, -0.1).is_err());
    }

    #[test]
    fn exact_evolution_is_unitary_and_periodic() {
        let p = params(0.37, 0.4, 0.6);
        let s = initial_joint_state(&p).unwrap();
        let e = kerr_evolve_exact(&s, p.phi0);
        assert!((e.norm_sqr() - 1.0).abs() < 1e-12);
        let full = kerr_evolve_exact(&s, 2.0 * PI);
        for (a, b) in full.branch_10.amplitudes().iter().zip(s.branch_10.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert_eq!(kerr_evolve_exact(&s, 0.0), s);
    }

    #[test]
    fn small_phase_breaks_coherence() {
        let p = params(0.01, 0.0, 0.5);
        let s = initial_joint_state(&p).unwrap();
        let e = kerr_evolve_exact(&s, p.phi0);
        let coh = coherent_vector(p.alpha, p.cutoff, TailPolicy::Strict).unwrap();
        let overlap = coh.inner(&e.branch_10).norm_sqr() * 2.0;
        assert!(overlap < 1.0 && overlap > 0.999);
    }

    #[test]
    fn first_order_on_coherent_state() {
        // (1 − iφ₀n̂)|α⟩ = |α⟩ − iφ₀α a†|α⟩
        let alpha = ComplexPoint::new(0.8, 0.3);
        let p = KerrSchemeParams::new(alpha, 0.02, 0.0, 1.0).unwrap();
        let s = initial_joint_state(&p).unwrap();
        let f = kerr_evolve_first_order(&s, p.phi0);
        let coh = coherent_vector(alpha, p.cutoff, TailPolicy::Strict).unwrap();
        let a = alpha.to_complex();
        for n in 0..=p.cutoff {
            let adag = if n == 0 { Complex64::new(0.0, 0.0) } else { coh.amplitude(n - 1) * (n as f64).sqrt() };
            let want = (coh.amplitude(n) - Complex64::new(0.0, p.phi0) * a * adag) * FRAC_1_SQRT_2;
            assert!((f.branch_10.amplitude(n) - want).norm() < 1e-14);
        }
        assert_eq!(kerr_evolve_first_order(&s, 0.0), s);
    }

    #[test]
    fn first_order_fidelity_bound() {
        let p = params(1e-2, 0.0, 0.5);
        let s = initial_joint_state(&p).unwrap();
        let a = kerr_evolve_exact(&s, p.phi0).branch_10.normalized().unwrap();
        let b = kerr_evolve_first_order(&s, p.phi0).branch_10.normalized().unwrap();
        let infidelity = 1.0 - a.inner(&b).norm_sqr();
        assert!(infidelity <= 10.0 * p.phi0 * p.phi0, "{infidelity}");
    }

    #[test]
    fn no_interaction_heralds_coherent_state() {
        for &(theta, t) in &[(0.0, 0.3), (1.1, 0.9), (-FRAC_PI_2, 0.2)] {
            let h = simulate(&params(0.0, theta, t), Evolution::Exact).unwrap();
            assert!((h.fitted.epsilon - 1.0).abs() < 1e-10);
            assert!((h.fidelity_to_fit - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn balanced_herald_is_photon_added() {
        let t = FRAC_1_SQRT_2;
        let h = simulate(&params(1e-3, -FRAC_PI_2, t), Evolution::Exact).unwrap();
        assert!(h.fitted.epsilon <= 1e-6, "{}", h.fitted.epsilon);
        let h1 = simulate(&params(1e-3, -FRAC_PI_2, t), Evolution::FirstOrder).unwrap();
        assert!(h1.fitted.epsilon < 1e-20);
        assert!(h1.projection.residual < 1e-12);
    }

    #[test]
    fn unbalanced_herald_matches_two_term_fit() {
        let p = params(0.01, -FRAC_PI_2, 0.8);
        let h = simulate(&p, Evolution::Exact).unwrap();
        let (c1, c2) = first_order_amplitudes(&p);
        let want = c1.norm_sqr() / (c1.norm_sqr() + c2.norm_sqr());
        assert!((h.fitted.epsilon - want).abs() < 1e-3 * want, "{} vs {want}", h.fitted.epsilon);
        assert!(h.fidelity_to_fit >= 0.9999);
    }

    #[test]
    fn outcomes_are_complementary() {
        for &(phi0, theta, t) in &[(0.3, 0.2, 0.1), (1.7, -1.0, 0.77), (0.0, 2.0, 1.0)] {
            let p = params(phi0, theta, t);
            let e = kerr_evolve_exact(&initial_joint_state(&p).unwrap(), phi0);
            let d1 = postselect_d1(&e, t).map(|h| h.success_probability).unwrap_or(0.0);
            let (_, d2) = postselect_complement(&e, t).unwrap();
            assert!((d1 + d2 - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dark_port_fails_to_herald() {
        // without interaction the two branches cancel at D1
        let p = params(0.0, -FRAC_PI_2, FRAC_1_SQRT_2);
        assert!(matches!(simulate(&p, Evolution::Exact), Err(Error::HeraldFailed { .. })));
    }

    #[test]
    fn weak_value_examples() {
        assert!((weak_matrix_element_nb(0.0, 1.0).unwrap() - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert_eq!(weak_matrix_element_nb(0.7, 0.0).unwrap(), Complex64::new(0.0, 0.0));
        let w = weak_matrix_element_nb(-FRAC_PI_2, FRAC_1_SQRT_2).unwrap();
        assert!((w - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn global_phase_leaves_fit_unchanged() {
        let p = params(0.05, -FRAC_PI_2, 0.6);
        let e = kerr_evolve_exact(&initial_joint_state(&p).unwrap(), p.phi0);
        let a = postselect_d1(&e, 0.6).unwrap();
        let b = postselect_d1(&e.scaled(Complex64::from_polar(1.0, 2.3)), 0.6).unwrap();
        assert!((a.fitted.epsilon - b.fitted.epsilon).abs() < 1e-12);
    }

    #[test]
    fn sweep_flags_failed_rows() {
        let p = params(0.0, -FRAC_PI_2, 0.0);
        let rows = transmissivity_sweep(
            &p,
            &[0.0, FRAC_1_SQRT_2, 1.0],
            SweepOptions { negativity_grid: None, ..Default::default() },
        )
        .unwrap();
        assert!(rows[0].outcome.is_ok() && rows[2].outcome.is_ok());
        assert!(matches!(rows[1].outcome, Err(Error::HeraldFailed { .. })));
    }
}
