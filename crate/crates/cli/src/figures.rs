//! The figure set: one CSV and one SVG per panel.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::{Path, PathBuf};

use hcs_core::wigner::{wigner_grid, WignerSource};
use hcs_core::{ComplexPoint, GridBounds, HcsParams, TailPolicy, WignerMethod};

use crate::commands::plot_table;
use crate::compute::{grid_table, metric_sweep, photon_table, Family, Metric};
use crate::error::{CliError, CliResult};
use crate::parse::{Range, Sweep, SweepVar};
use crate::svg::heatmap;
use crate::table::{fmt_sig, Table};

pub const EPSILONS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const WIGNER_ALPHAS: [f64; 3] = [0.0, 1.0, 2.0];

const R_RANGE: Range = Range { from: 0.05, to: 3.0, steps: 60 };
const ALPHA_RANGE: Range = Range { from: 0.0, to: 4.0, steps: 81 };

fn r_sweep() -> Sweep {
    Sweep { var: SweepVar::AlphaMag, range: R_RANGE }
}

fn alpha_sweep() -> Sweep {
    Sweep { var: SweepVar::AlphaMag, range: ALPHA_RANGE }
}

#[derive(Debug)]
pub struct FigureOutcome {
    pub name: String,
    pub result: CliResult<Vec<PathBuf>>,
}

fn family(theta: f64, phi: f64, alpha: f64) -> Family {
    Family { epsilons: EPSILONS.to_vec(), theta, phi, alpha: ComplexPoint::real(alpha) }
}

fn write(path: PathBuf, text: &str) -> CliResult<PathBuf> {
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

fn save(dir: &Path, stem: &str, table: &Table, svg: &str) -> CliResult<Vec<PathBuf>> {
    Ok(vec![write(dir.join(format!("{stem}.csv")), &table.to_csv())?, write(dir.join(format!("{stem}.svg")), svg)?])
}

fn line_figure(
    dir: &Path,
    stem: &str,
    title: &str,
    family: Family,
    sweep: Sweep,
    metric: Metric,
    policy: TailPolicy,
) -> CliResult<Vec<PathBuf>> {
    let computed = metric_sweep(&family, &sweep, metric, None, policy)?;
    if let Some((point, err)) = computed.failures.into_iter().next() {
        return Err(CliError::Partial(format!("{point}: {err}")));
    }
    let mut table = computed.table;
    table.meta("figure", stem);
    table.columns[0] = if sweep.var == SweepVar::AlphaMag { "abs_alpha".into() } else { sweep.var.name().into() };
    let svg = plot_table(&table, title, metric.column(), false);
    save(dir, stem, &table, &svg)
}

fn fig1(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut table = photon_table(&family(PI, 0.0, 2.0), 20)?;
    table.meta("figure", "fig1");
    let svg = plot_table(&table, "Photon number distribution, |α|=2, θ=π", "P_n", true);
    save(dir, "fig1", &table, &svg)
}

fn fig5_panel(dir: &Path, epsilon: f64, alpha: f64, policy: TailPolicy) -> CliResult<Vec<PathBuf>> {
    let params = HcsParams::new(epsilon, PI, 0.0, ComplexPoint::real(alpha))?;
    let bounds = GridBounds::default_for(params.alpha);
    let grid = wigner_grid(WignerSource::Params(&params), bounds, WignerMethod::ClosedForm, policy)?;
    let mut table = grid_table(&grid);
    table
        .meta("figure", "fig5")
        .meta("epsilon", fmt_sig(epsilon))
        .meta("theta", fmt_sig(PI))
        .meta("phi", "0")
        .meta("alpha", format!("{},0", fmt_sig(alpha)))
        .meta("method", "closed");
    let svg = heatmap(&format!("W(x, p), ε={}, |α|={}, θ=π", fmt_sig(epsilon), fmt_sig(alpha)), &grid);
    save(dir, &panel_stem(epsilon, alpha), &table, &svg)
}

/// `eps0.50_alpha1`.
pub fn panel_stem(epsilon: f64, alpha: f64) -> String {
    format!("eps{epsilon:.2}_alpha{alpha}")
}

/// Writes every figure under `out_dir`. A failing panel is reported and the rest still run.
pub fn reproduce_figures(out_dir: &Path, policy: TailPolicy) -> CliResult<Vec<FigureOutcome>> {
    let fig5_dir = out_dir.join("fig5");
    fs::create_dir_all(&fig5_dir).map_err(|e| CliError::io(&fig5_dir, e))?;
    let d = out_dir;
    let mut out = vec![
        FigureOutcome { name: "fig1".into(), result: fig1(d) },
        FigureOutcome {
            name: "fig2".into(),
            result: line_figure(
                d,
                "fig2",
                "Mandel Q versus r, θ=π",
                family(PI, 0.0, 1.0),
                r_sweep(),
                Metric::Mandel,
                policy,
            ),
        },
        FigureOutcome {
            name: "figW".into(),
            result: line_figure(
                d,
                "figW",
                "Skew information versus r, θ=π",
                family(PI, 0.0, 1.0),
                r_sweep(),
                Metric::Skew,
                policy,
            ),
        },
        FigureOutcome {
            name: "fig3a".into(),
            result: line_figure(
                d,
                "fig3a",
                "Quadrature squeezing S_φ, φ=0",
                family(0.0, 0.0, 1.0),
                alpha_sweep(),
                Metric::Quadrature(0.0),
                policy,
            ),
        },
        FigureOutcome {
            name: "fig3b".into(),
            result: line_figure(
                d,
                "fig3b",
                "Quadrature squeezing S_φ, φ=π/2",
                family(0.0, 0.0, 1.0),
                alpha_sweep(),
                Metric::Quadrature(FRAC_PI_2),
                policy,
            ),
        },
        FigureOutcome {
            name: "fig4a".into(),
            result: line_figure(
                d,
                "fig4a",
                "AS squeezing S_ass, φ=0",
                family(0.0, 0.0, 1.0),
                alpha_sweep(),
                Metric::AmplitudeSquared,
                policy,
            ),
        },
        FigureOutcome {
            name: "fig4b".into(),
            result: line_figure(
                d,
                "fig4b",
                "AS squeezing S_ass, φ=π",
                family(0.0, PI, 1.0),
                alpha_sweep(),
                Metric::AmplitudeSquared,
                policy,
            ),
        },
    ];
    for &e in &EPSILONS {
        for &a in &WIGNER_ALPHAS {
            out.push(FigureOutcome {
                name: format!("fig5/{}", panel_stem(e, a)),
                result: fig5_panel(&fig5_dir, e, a, policy),
            });
        }
    }
    Ok(out)
}
