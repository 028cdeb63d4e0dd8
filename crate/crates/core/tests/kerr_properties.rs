use std::f64::consts::FRAC_PI_2;

use hcs_core::hcs::project_onto_hcs_span;
use hcs_core::kerr::{
    initial_joint_state, kerr_evolve_exact, postselect_complement, postselect_d1, transmissivity_sweep, SweepOptions,
};
use hcs_core::{Complex64, ComplexPoint, KerrSchemeParams};
use proptest::prelude::*;

fn scheme() -> impl Strategy<Value = KerrSchemeParams> {
    (0.0f64..2.5, 0.0f64..6.3, -3.0f64..3.0, 0.0f64..6.3, 0.0f64..=1.0).prop_map(|(r, w, phi0, theta, t)| {
        KerrSchemeParams::new(ComplexPoint::from_polar(r, w), phi0, theta, t).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exact_evolution_preserves_norm(p in scheme()) {
        let s = initial_joint_state(&p).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        let e = kerr_evolve_exact(&s, p.phi0);
        prop_assert!((e.norm_sqr() - s.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn detector_outcomes_exhaust_probability(p in scheme()) {
        let e = kerr_evolve_exact(&initial_joint_state(&p).unwrap(), p.phi0);
        let t = p.transmissivity;
        let d1 = postselect_d1(&e, t).map(|h| h.success_probability).unwrap_or(0.0);
        let (_, d2) = postselect_complement(&e, t).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d1));
        prop_assert!((d1 + d2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fitted_epsilon_ignores_global_phase(p in scheme(), g in 0.0f64..6.3) {
        let e = kerr_evolve_exact(&initial_joint_state(&p).unwrap(), p.phi0);
        let t = p.transmissivity;
        if let (Ok(a), Ok(b)) = (postselect_d1(&e, t), postselect_d1(&e.scaled(Complex64::from_polar(1.0, g)), t)) {
            prop_assert!((a.fitted.epsilon - b.fitted.epsilon).abs() < 1e-10);
            prop_assert!((a.success_probability - b.success_probability).abs() < 1e-12);
        }
    }

    #[test]
    fn balanced_phase_herald_stays_near_span(r in 0.1f64..1.5, phi0 in 1e-3f64..0.05, t in 0.0f64..=1.0) {
        let p = KerrSchemeParams::new(ComplexPoint::real(r), phi0, -FRAC_PI_2, t).unwrap();
        let e = kerr_evolve_exact(&initial_joint_state(&p).unwrap(), phi0);
        let signal = e.branch_10.combine(Complex64::new(t, 0.0), &e.branch_01, Complex64::new(p.reflectivity(), 0.0));
        let proj = project_onto_hcs_span(&signal, p.alpha).unwrap();
        prop_assert!(proj.residual <= 10.0 * phi0 * phi0, "{} > {}", proj.residual, 10.0 * phi0 * phi0);
    }
}

#[test]
fn sweep_fit_is_monotone_on_each_side_of_balance() {
    let p = KerrSchemeParams::new(ComplexPoint::real(1.0), 0.01, -FRAC_PI_2, 0.5).unwrap();
    let ts: Vec<f64> = (0..=40).map(|k| k as f64 / 40.0).collect();
    let opts = SweepOptions { negativity_grid: None, ..Default::default() };
    let rows = transmissivity_sweep(&p, &ts, opts).unwrap();
    let eps: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.outcome.as_ref().unwrap().epsilon_fit)).collect();
    let balance = std::f64::consts::FRAC_1_SQRT_2;
    let below: Vec<f64> = eps.iter().filter(|(t, _)| *t < balance).map(|e| e.1).collect();
    let above: Vec<f64> = eps.iter().filter(|(t, _)| *t > balance).map(|e| e.1).collect();
    assert!(below.windows(2).all(|w| w[1] <= w[0]));
    assert!(above.windows(2).all(|w| w[1] >= w[0]));
}
