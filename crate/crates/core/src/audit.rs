//! Closed forms checked against the truncated-Fock oracle.
//!
//! Every row compares one formula with its brute-force counterpart over a
//! batch of parameter draws and keeps the worst case. Draws come from a
//! ChaCha8 stream seeded with [`AUDIT_SEED`], so reports are reproducible bit
//! for bit.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::{expectation_normal_ordered, ComplexPoint, FockVector, TailPolicy};
use crate::hcs::{
    adag2a2_closed, adag2a2_rederived, build_hcs_auto, hcs_fock_unnormalized, mean_n_closed, normalization_constant,
    photon_distribution, project_onto_hcs_span, wigner_closed, Adag2a2Variant, HcsParams,
};
use crate::kerr::{first_order_amplitudes, first_order_map, initial_joint_state, KerrSchemeParams};
use crate::phase_space::wigner_point_oracle;

pub const AUDIT_SEED: u64 = 0x4843_5f41_5544_4954;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub seed: u64,
    pub draws: usize,
    /// Wigner sample points per parameter draw.
    pub wigner_points: usize,
    pub alpha_max: f64,
    /// Relative tolerance for moments and normalization.
    pub moment_rel_tol: f64,
    /// Absolute tolerance for photon probabilities.
    pub probability_abs_tol: f64,
    /// Absolute tolerance for Wigner values.
    pub wigner_abs_tol: f64,
    /// Absolute tolerance for heralded-state amplitudes.
    pub kerr_abs_tol: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            seed: AUDIT_SEED,
            draws: 500,
            wigner_points: 4,
            alpha_max: 3.0,
            moment_rel_tol: 1e-9,
            probability_abs_tol: 1e-10,
            wigner_abs_tol: 1e-8,
            kerr_abs_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRow {
    pub formula: String,
    pub regime: String,
    /// Which scalar `printed` and `oracle` refer to.
    pub quantity: String,
    pub samples: usize,
    pub printed: f64,
    pub oracle: f64,
    pub max_abs_deviation: f64,
    pub max_rel_deviation: f64,
    pub tolerance: f64,
    /// `"abs"` or `"rel"`: which deviation the tolerance applies to.
    pub tolerance_kind: String,
    pub status: Status,
    /// Parameters of the worst sample.
    pub parameters: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub config: AuditConfig,
    pub skipped_degenerate: usize,
    pub rows: Vec<DiscrepancyRow>,
}

impl DiscrepancyReport {
    pub fn discrepancies(&self) -> impl Iterator<Item = &DiscrepancyRow> {
        self.rows.iter().filter(|r| r.status == Status::Mismatch)
    }

    pub fn is_clean(&self) -> bool {
        self.discrepancies().next().is_none()
    }

    pub fn row(&self, formula: &str, regime: &str) -> Option<&DiscrepancyRow> {
        self.rows.iter().find(|r| r.formula == formula && r.regime == regime)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Tol {
    Abs(f64),
    Rel(f64),
}

/// Running worst case for one row.
struct Tracker {
    formula: &'static str,
    regime: &'static str,
    tol: Tol,
    samples: usize,
    max_abs: f64,
    max_rel: f64,
    worst_score: f64,
    worst: Option<(String, f64, f64, BTreeMap<String, f64>)>,
}

impl Tracker {
    fn new(formula: &'static str, regime: &'static str, tol: Tol) -> Self {
        Self { formula, regime, tol, samples: 0, max_abs: 0.0, max_rel: 0.0, worst_score: -1.0, worst: None }
    }

    fn push(&mut self, quantity: &str, printed: f64, oracle: f64, params: &BTreeMap<String, f64>) {
        let abs = (printed - oracle).abs();
        let rel = abs / oracle.abs().max(f64::MIN_POSITIVE);
        let rel = if oracle == 0.0 && abs == 0.0 { 0.0 } else { rel };
        self.samples += 1;
        self.max_abs = self.max_abs.max(abs);
        self.max_rel = self.max_rel.max(rel);
        let score = match self.tol {
            Tol::Abs(_) => abs,
            Tol::Rel(_) => rel,
        };
        if score > self.worst_score {
            self.worst_score = score;
            self.worst = Some((quantity.to_string(), printed, oracle, params.clone()));
        }
    }

    fn finish(self) -> DiscrepancyRow {
        let (tolerance, kind, dev) = match self.tol {
            Tol::Abs(t) => (t, "abs", self.max_abs),
            Tol::Rel(t) => (t, "rel", self.max_rel),
        };
        let (quantity, printed, oracle, parameters) =
            self.worst.unwrap_or_else(|| (String::new(), f64::NAN, f64::NAN, BTreeMap::new()));
        DiscrepancyRow {
            formula: self.formula.to_string(),
            regime: self.regime.to_string(),
            quantity,
            samples: self.samples,
            printed,
            oracle,
            max_abs_deviation: self.max_abs,
            max_rel_deviation: self.max_rel,
            tolerance,
            tolerance_kind: kind.to_string(),
            status: if self.samples > 0 && dev <= tolerance { Status::Match } else { Status::Mismatch },
            parameters,
        }
    }
}

fn hcs_labels(p: &HcsParams) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("epsilon".to_string(), p.epsilon),
        ("theta".to_string(), p.theta),
        ("phi".to_string(), p.phi),
        ("alpha_re".to_string(), p.alpha.re),
        ("alpha_im".to_string(), p.alpha.im),
    ])
}

fn kerr_labels(p: &KerrSchemeParams) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("alpha_re".to_string(), p.alpha.re),
        ("alpha_im".to_string(), p.alpha.im),
        ("phi0".to_string(), p.phi0),
        ("theta_ps".to_string(), p.theta_ps),
        ("t".to_string(), p.transmissivity),
    ])
}

fn draw_alpha(rng: &mut ChaCha8Rng, max: f64) -> ComplexPoint {
    ComplexPoint::from_polar(max * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

fn draw_hcs(rng: &mut ChaCha8Rng, alpha_max: f64) -> HcsParams {
    let epsilon = rng.gen::<f64>();
    let theta = rng.gen_range(0.0..TAU);
    let phi = rng.gen_range(0.0..TAU);
    HcsParams::new(epsilon, theta, phi, draw_alpha(rng, alpha_max)).expect("drawn in range")
}

/// Moves `φ` so that `Re[e^{i(θ−φ)}α] = 0`.
fn zero_interference(p: HcsParams) -> HcsParams {
    let phi = p.theta - FRAC_PI_2 + p.alpha.arg();
    HcsParams { phi, ..p }
}

/// One row of printed `⟨a†²a²⟩` against the oracle.
fn audit_adag2a2(regime: &'static str, params: &[HcsParams], tol: f64) -> Result<DiscrepancyRow> {
    let mut row = Tracker::new("adag2a2_as_printed", regime, Tol::Rel(tol));
    for p in params {
        let printed = adag2a2_closed(p, Adag2a2Variant::AsPrinted)?;
        let oracle = adag2a2_closed(p, Adag2a2Variant::OracleValidated)?;
        row.push("<a†²a²>", printed, oracle, &hcs_labels(p));
    }
    Ok(row.finish())
}

/// Heralded `(c₁, c₂)` from the linearized evolution, read off by projection.
fn heralded_amplitudes(p: &KerrSchemeParams) -> Result<(Complex64, Complex64)> {
    let evolved = first_order_map(&initial_joint_state(p)?, p.phi0);
    let t = p.transmissivity;
    let signal: FockVector =
        evolved.branch_10.combine(Complex64::new(t, 0.0), &evolved.branch_01, Complex64::new(p.reflectivity(), 0.0));
    let proj = project_onto_hcs_span(&signal, p.alpha)?;
    Ok((proj.coherent, proj.photon_added))
}

/// The balanced-phase form as published: `i(r−t)/√2 |α⟩ + tφ₀α/√2 a†|α⟩`.
fn printed_balanced_amplitudes(p: &KerrSchemeParams) -> (Complex64, Complex64) {
    let t = p.transmissivity;
    let r = p.reflectivity();
    (Complex64::new(0.0, (r - t) * FRAC_1_SQRT_2), p.alpha.to_complex() * t * p.phi0 * FRAC_1_SQRT_2)
}

fn push_amplitudes(
    row: &mut Tracker,
    printed: (Complex64, Complex64),
    oracle: (Complex64, Complex64),
    labels: &BTreeMap<String, f64>,
) {
    row.push("Re c1", printed.0.re, oracle.0.re, labels);
    row.push("Im c1", printed.0.im, oracle.0.im, labels);
    row.push("Re c2", printed.1.re, oracle.1.re, labels);
    row.push("Im c2", printed.1.im, oracle.1.im, labels);
}

fn audit_kerr_balanced(regime: &'static str, params: &[KerrSchemeParams], tol: f64) -> Result<DiscrepancyRow> {
    let mut row = Tracker::new("kerr_balanced_phase_as_printed", regime, Tol::Abs(tol));
    for p in params {
        push_amplitudes(&mut row, printed_balanced_amplitudes(p), heralded_amplitudes(p)?, &kerr_labels(p));
    }
    Ok(row.finish())
}

/// Runs every comparison. Parameter sets that hit the degeneracy guard are
/// counted and skipped.
pub fn run_audit(config: &AuditConfig) -> Result<DiscrepancyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut skipped = 0;
    let mut draws = Vec::with_capacity(config.draws);
    while draws.len() < config.draws {
        let p = draw_hcs(&mut rng, config.alpha_max);
        if normalization_constant(&p).is_err() {
            skipped += 1;
            continue;
        }
        draws.push(p);
    }

    let rel = Tol::Rel(config.moment_rel_tol);
    let mut norm = Tracker::new("normalization", "random", rel);
    let mut pn = Tracker::new("photon_probability", "random", Tol::Abs(config.probability_abs_tol));
    let mut mean_n = Tracker::new("mean_n", "random", rel);
    let mut rederived = Tracker::new("adag2a2_rederived", "random", rel);
    let mut wigner = Tracker::new("wigner_closed", "random", Tol::Abs(config.wigner_abs_tol));

    for p in &draws {
        let labels = hcs_labels(p);
        let cutoff = p.cutoff();
        let raw = hcs_fock_unnormalized(p, cutoff, TailPolicy::Strict)?;
        norm.push("N", normalization_constant(p)?, raw.norm_sqr().sqrt().recip(), &labels);

        let state = build_hcs_auto(p)?;
        for (n, (closed, oracle)) in photon_distribution(p, cutoff)?.into_iter().zip(state.probabilities()).enumerate()
        {
            pn.push(&format!("P_{n}"), closed, oracle, &labels);
        }
        mean_n.push(
            "<a†a>",
            mean_n_closed(p)?,
            expectation_normal_ordered(&state, 1, 1, TailPolicy::Strict)?.re,
            &labels,
        );
        rederived.push(
            "<a†²a²>",
            adag2a2_rederived(p)?,
            expectation_normal_ordered(&state, 2, 2, TailPolicy::Strict)?.re,
            &labels,
        );
        for _ in 0..config.wigner_points {
            let z = draw_alpha(&mut rng, config.alpha_max);
            let mut labels = labels.clone();
            labels.insert("z_re".to_string(), z.re);
            labels.insert("z_im".to_string(), z.im);
            wigner.push("W(z)", wigner_closed(p, z)?, wigner_point_oracle(&state, z, TailPolicy::Strict)?, &labels);
        }
    }

    let mut rows = vec![norm.finish(), pn.finish(), mean_n.finish(), rederived.finish(), wigner.finish()];

    let tol = config.moment_rel_tol;
    rows.push(audit_adag2a2("random", &draws, tol)?);
    let at_eps = |e: f64| draws.iter().map(|p| HcsParams { epsilon: e, ..*p }).collect::<Vec<_>>();
    rows.push(audit_adag2a2("epsilon=0", &at_eps(0.0), tol)?);
    rows.push(audit_adag2a2("epsilon=1", &at_eps(1.0), tol)?);
    let orthogonal: Vec<_> = draws.iter().map(|p| zero_interference(*p)).collect();
    rows.push(audit_adag2a2("zero_interference", &orthogonal, tol)?);
    let unit: Vec<_> = draws
        .iter()
        .map(|p| p.with_alpha(ComplexPoint::from_polar(1.0, p.alpha.arg())))
        .filter(|p| normalization_constant(p).is_ok())
        .collect();
    rows.push(audit_adag2a2("abs_alpha=1", &unit, tol)?);

    // heralded amplitudes of the linearized scheme
    let mut kerr_draws = Vec::with_capacity(config.draws / 5);
    for _ in 0..config.draws / 5 {
        let alpha = draw_alpha(&mut rng, 2.0);
        let phi0 = rng.gen_range(0.0..0.05);
        let theta_ps = rng.gen_range(0.0..TAU);
        let t = rng.gen::<f64>();
        kerr_draws.push(KerrSchemeParams::new(alpha, phi0, theta_ps, t)?);
    }
    let mut general = Tracker::new("kerr_first_order_general", "random", Tol::Abs(config.kerr_abs_tol));
    for p in &kerr_draws {
        push_amplitudes(&mut general, first_order_amplitudes(p), heralded_amplitudes(p)?, &kerr_labels(p));
    }
    rows.push(general.finish());

    let balanced = |p: &KerrSchemeParams| KerrSchemeParams {
        theta_ps: -FRAC_PI_2,
        alpha: ComplexPoint::real(p.alpha.norm()),
        ..*p
    };
    let base: Vec<_> = kerr_draws.iter().map(balanced).collect();
    rows.push(audit_kerr_balanced("random", &base, config.kerr_abs_tol)?);
    let no_kerr: Vec<_> = base.iter().map(|p| KerrSchemeParams { phi0: 0.0, ..*p }).collect();
    rows.push(audit_kerr_balanced("phi0=0", &no_kerr, config.kerr_abs_tol)?);
    let blocked: Vec<_> = base.iter().map(|p| KerrSchemeParams { transmissivity: 0.0, ..*p }).collect();
    rows.push(audit_kerr_balanced("t=0", &blocked, config.kerr_abs_tol)?);

    Ok(DiscrepancyReport { config: *config, skipped_degenerate: skipped, rows })
}
