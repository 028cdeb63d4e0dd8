//! Tables shared by the subcommands and the figure set.

use rayon::prelude::*;

use hcs_core::hcs::{build_hcs_fock, photon_distribution};
use hcs_core::metrics::{
    mandel_q_from_moments, quadrature_min_exact, quadrature_squeezing_from_moments, s_ass_from_moments,
    skew_information_from_moments,
};
use hcs_core::wigner::negativity_report;
use hcs_core::{ComplexPoint, HcsParams, MomentSet, QuadratureSpec, TailPolicy, WignerGrid};

use crate::parse::{Sweep, SweepVar};
use crate::table::{fmt_sig, Table};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Mandel,
    Skew,
    Quadrature(f64),
    QuadratureMin,
    AmplitudeSquared,
}

impl Metric {
    pub fn column(self) -> &'static str {
        match self {
            Metric::Mandel => "Q",
            Metric::Skew => "W",
            Metric::Quadrature(_) => "S_phi",
            Metric::QuadratureMin => "S_min",
            Metric::AmplitudeSquared => "S_ass",
        }
    }

    pub fn describe(self) -> String {
        match self {
            Metric::Mandel => "Mandel Q".into(),
            Metric::Skew => "skew information W".into(),
            Metric::Quadrature(a) => format!("quadrature squeezing S_phi, phi_quad={}", fmt_sig(a)),
            Metric::QuadratureMin => "quadrature squeezing minimized over phi_quad".into(),
            Metric::AmplitudeSquared => "amplitude-squared squeezing S_ass".into(),
        }
    }

    pub fn evaluate(self, params: &HcsParams, cutoff: Option<usize>, policy: TailPolicy) -> hcs_core::Result<f64> {
        let state = build_hcs_fock(params, cutoff.unwrap_or_else(|| params.cutoff()), policy)?;
        let m = MomentSet::from_state(&state, policy)?;
        Ok(match self {
            Metric::Mandel => mandel_q_from_moments(&m)?,
            Metric::Skew => skew_information_from_moments(&m),
            Metric::Quadrature(a) => quadrature_squeezing_from_moments(&m, QuadratureSpec::new(a)),
            Metric::QuadratureMin => quadrature_min_exact(&m).1,
            Metric::AmplitudeSquared => s_ass_from_moments(&m),
        })
    }
}

/// Everything that defines a family of hybrid states except ε.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub epsilons: Vec<f64>,
    pub theta: f64,
    pub phi: f64,
    pub alpha: ComplexPoint,
}

impl Family {
    pub fn params(&self, epsilon: f64) -> hcs_core::Result<HcsParams> {
        HcsParams::new(epsilon, self.theta, self.phi, self.alpha)
    }

    pub fn swept(&self, epsilon: f64, var: SweepVar, value: f64) -> hcs_core::Result<HcsParams> {
        let p = self.params(epsilon)?;
        match var {
            SweepVar::AlphaMag => Ok(p.with_alpha(ComplexPoint::from_polar(value, self.alpha.arg()))),
            SweepVar::AlphaArg => Ok(p.with_alpha(ComplexPoint::from_polar(self.alpha.norm(), value))),
            SweepVar::Theta => HcsParams::new(epsilon, value, p.phi, p.alpha),
            SweepVar::Phi => HcsParams::new(epsilon, p.theta, value, p.alpha),
        }
    }

    /// Parameter metadata; the swept one is left out.
    fn describe(&self, table: &mut Table, swept: Option<SweepVar>) {
        let eps: Vec<String> = self.epsilons.iter().map(|&e| fmt_sig(e)).collect();
        table.meta("epsilon", eps.join(","));
        if swept != Some(SweepVar::Theta) {
            table.meta("theta", fmt_sig(self.theta));
        }
        if swept != Some(SweepVar::Phi) {
            table.meta("phi", fmt_sig(self.phi));
        }
        match swept {
            Some(SweepVar::AlphaMag) => table.meta("alpha_arg", fmt_sig(self.alpha.arg())),
            Some(SweepVar::AlphaArg) => table.meta("alpha_mag", fmt_sig(self.alpha.norm())),
            _ => table.meta("alpha", format!("{},{}", fmt_sig(self.alpha.re), fmt_sig(self.alpha.im))),
        };
    }
}

pub fn eps_column(epsilon: f64) -> String {
    format!("eps={}", fmt_sig(epsilon))
}

fn cutoff_note(cutoff: Option<usize>, fixed: Option<&HcsParams>) -> String {
    match (cutoff, fixed) {
        (Some(n), _) => n.to_string(),
        (None, Some(p)) => p.cutoff().to_string(),
        (None, None) => "auto per point".to_string(),
    }
}

fn policy_note(policy: TailPolicy) -> &'static str {
    match policy {
        TailPolicy::Strict => "strict",
        TailPolicy::Lenient => "lenient",
    }
}

/// A table plus the points that could not be evaluated (left as empty cells).
#[derive(Debug)]
pub struct Computed {
    pub table: Table,
    pub failures: Vec<(String, hcs_core::Error)>,
}

/// `(n, P_n per ε)` from the closed-form distribution.
pub fn photon_table(family: &Family, n_max: usize) -> hcs_core::Result<Table> {
    let columns: Vec<Vec<f64>> = family
        .epsilons
        .iter()
        .map(|&e| photon_distribution(&family.params(e)?, n_max))
        .collect::<hcs_core::Result<_>>()?;
    let mut names = vec!["n".to_string()];
    names.extend(family.epsilons.iter().map(|&e| eps_column(e)));
    let mut table = Table::new(names);
    table.meta("quantity", "photon number distribution P_n");
    family.describe(&mut table, None);
    table.meta("n_max", n_max).meta("cutoff", "none (closed form)");
    for n in 0..=n_max {
        let mut row = vec![Some(n as f64)];
        row.extend(columns.iter().map(|c| Some(c[n])));
        table.push(row);
    }
    Ok(table)
}

/// One metric at fixed parameters, one row per ε.
pub fn metric_points(
    family: &Family,
    metric: Metric,
    cutoff: Option<usize>,
    policy: TailPolicy,
) -> hcs_core::Result<Computed> {
    let params: Vec<HcsParams> = family.epsilons.iter().map(|&e| family.params(e)).collect::<hcs_core::Result<_>>()?;
    let values: Vec<hcs_core::Result<f64>> = params.par_iter().map(|p| metric.evaluate(p, cutoff, policy)).collect();
    let mut table = Table::new(vec!["epsilon".into(), metric.column().into()]);
    table.meta("quantity", metric.describe());
    family.describe(&mut table, None);
    table.meta("cutoff", cutoff_note(cutoff, params.first())).meta("tail_policy", policy_note(policy));
    let mut failures = Vec::new();
    for (p, v) in params.iter().zip(values) {
        let cell = match v {
            Ok(v) => Some(v),
            Err(e) => {
                failures.push((format!("epsilon={}", fmt_sig(p.epsilon)), e));
                None
            }
        };
        table.push(vec![Some(p.epsilon), cell]);
    }
    Ok(Computed { table, failures })
}

/// `(sweep_value, metric per ε)`, evaluated in parallel and assembled in index order.
pub fn metric_sweep(
    family: &Family,
    sweep: &Sweep,
    metric: Metric,
    cutoff: Option<usize>,
    policy: TailPolicy,
) -> hcs_core::Result<Computed> {
    let values = sweep.range.values();
    let points: Vec<HcsParams> = values
        .iter()
        .flat_map(|&v| family.epsilons.iter().map(move |&e| (e, v)))
        .map(|(e, v)| family.swept(e, sweep.var, v))
        .collect::<hcs_core::Result<_>>()?;
    let results: Vec<hcs_core::Result<f64>> = points.par_iter().map(|p| metric.evaluate(p, cutoff, policy)).collect();

    let mut names = vec!["sweep_value".to_string()];
    names.extend(family.epsilons.iter().map(|&e| eps_column(e)));
    let mut table = Table::new(names);
    table.meta("quantity", metric.describe());
    family.describe(&mut table, Some(sweep.var));
    table
        .meta("sweep", format!("{}:{}", sweep.var.name(), sweep.range))
        .meta("cutoff", cutoff_note(cutoff, None))
        .meta("tail_policy", policy_note(policy));

    let mut failures = Vec::new();
    let mut results = results.into_iter();
    for &v in &values {
        let mut row = vec![Some(v)];
        for &e in &family.epsilons {
            match results.next().expect("one result per point") {
                Ok(x) => row.push(Some(x)),
                Err(err) => {
                    failures.push((format!("{}={}, epsilon={}", sweep.var.name(), fmt_sig(v), fmt_sig(e)), err));
                    row.push(None);
                }
            }
        }
        table.push(row);
    }
    Ok(Computed { table, failures })
}

/// `(x, p, W)` rows in grid order, with the negativity summary in the metadata.
pub fn grid_table(grid: &WignerGrid) -> Table {
    let b = grid.bounds;
    let mut table = Table::new(vec!["x".into(), "p".into(), "W".into()]);
    let neg = negativity_report(grid);
    table
        .meta(
            "grid",
            format!(
                "{}:{}:{}:{}:{}:{}",
                fmt_sig(b.x_min),
                fmt_sig(b.x_max),
                fmt_sig(b.p_min),
                fmt_sig(b.p_max),
                b.nx,
                b.np
            ),
        )
        .meta("min_W", fmt_sig(neg.min_value))
        .meta("min_location", format!("{},{}", fmt_sig(neg.min_location.re), fmt_sig(neg.min_location.im)))
        .meta("negative_volume", fmt_sig(neg.negative_volume))
        .meta("integral", fmt_sig(grid.integral()));
    for (x, p, w) in grid.iter() {
        table.push(vec![Some(x), Some(p), Some(w)]);
    }
    table
}
