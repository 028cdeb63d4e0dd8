use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use hcs_core::audit::{run_audit, AuditConfig, DiscrepancyReport, Status};
use hcs_core::hcs::{build_hcs_fock, wigner_closed};
use hcs_core::kerr::{transmissivity_sweep, Evolution, SweepOptions};
use hcs_core::phase_space::wigner_point_oracle;
use hcs_core::wigner::{wigner_grid, WignerSource};
use hcs_core::{ComplexPoint, GridBounds, KerrSchemeParams, TailPolicy, WignerMethod};

use crate::compute::{grid_table, metric_points, metric_sweep, photon_table, Computed, Family, Metric};
use crate::error::{CliError, CliResult};
use crate::figures::reproduce_figures;
use crate::parse::{parse_angle, parse_complex, parse_grid, parse_range, parse_real, parse_sweep, Range, Sweep};
use crate::svg::{heatmap, line_plot, Series};
use crate::table::{fmt_sig, Table};

#[derive(Debug, Parser)]
#[command(
    name = "hcs-lab",
    version,
    about = "Photon statistics, squeezing, Wigner functions and Kerr heralding of hybrid coherent states"
)]
pub struct Cli {
    /// Flat `key = value` file of flags; explicit flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Write results to this file instead of stdout.
    #[arg(short, long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Output format; defaults to the output file extension, else csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Warn instead of failing when the Fock cutoff loses probability.
    #[arg(long, global = true)]
    pub lenient: bool,

    /// Log more; repeat for debug output.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Photon number distribution P_n.
    PhotonDist(PhotonArgs),
    /// Mandel Q factor.
    Mandel(MetricArgs),
    /// Wigner–Yanase skew information.
    Skew(MetricArgs),
    /// Quadrature squeezing S_phi.
    QuadSqueeze(QuadArgs),
    /// Amplitude-squared squeezing S_ass.
    AsSqueeze(MetricArgs),
    /// Wigner function at a point or on a grid.
    Wigner(WignerArgs),
    /// Heralded preparation through a cross-Kerr coupling.
    KerrSim(KerrArgs),
    /// Regenerate the data and plots of the figure set.
    ReproduceFigures(FigureArgs),
    /// Compare printed closed forms with the Fock-space oracle.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Superposition weight(s) in [0, 1], comma separated.
    #[arg(long, visible_alias = "epsilons", value_delimiter = ',', action = ArgAction::Set, required = true, value_parser = parse_real)]
    pub epsilon: Vec<f64>,

    /// Coherent amplitude as re,im.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, conflicts_with_all = ["alpha_mag", "alpha_arg"])]
    pub alpha: Option<ComplexPoint>,

    /// |alpha|, used with --alpha-arg instead of --alpha.
    #[arg(long, value_parser = parse_real)]
    pub alpha_mag: Option<f64>,

    /// arg(alpha) in radians or multiples of pi.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_angle)]
    pub alpha_arg: Option<f64>,

    /// Phase of the coherent branch.
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_angle)]
    pub theta: f64,

    /// Phase of the photon-added branch.
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_angle)]
    pub phi: f64,

    /// Fock cutoff; chosen from |alpha| when omitted.
    #[arg(long)]
    pub cutoff: Option<usize>,
}

fn resolve_alpha(alpha: Option<ComplexPoint>, mag: Option<f64>, arg: Option<f64>) -> ComplexPoint {
    alpha.unwrap_or_else(|| ComplexPoint::from_polar(mag.unwrap_or(1.0), arg.unwrap_or(0.0)))
}

impl StateArgs {
    pub fn family(&self) -> Family {
        Family {
            epsilons: self.epsilon.clone(),
            theta: self.theta,
            phi: self.phi,
            alpha: resolve_alpha(self.alpha, self.alpha_mag, self.alpha_arg),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PhotonArgs {
    #[command(flatten)]
    pub state: StateArgs,

    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    #[command(flatten)]
    pub state: StateArgs,

    /// var:from:to:steps with var one of alpha-mag (r), alpha-arg (omega), theta, phi.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sweep)]
    pub sweep: Option<Sweep>,
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    #[command(flatten)]
    pub metric: MetricArgs,

    /// Quadrature angle of X_phi.
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_angle)]
    pub quad_angle: f64,

    /// Minimize over the quadrature angle instead.
    #[arg(long)]
    pub min: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Oracle,
}

#[derive(Debug, Clone, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub state: StateArgs,

    /// Single phase-space point x,p.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, conflicts_with = "grid")]
    pub point: Option<ComplexPoint>,

    /// x_min:x_max:p_min:p_max:nx[:np]; defaults to ±4 around alpha.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
    pub grid: Option<GridBounds>,

    #[arg(long, value_enum, default_value = "closed")]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Args)]
pub struct KerrArgs {
    /// Coherent amplitude as re,im.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, conflicts_with_all = ["alpha_mag", "alpha_arg"])]
    pub alpha: Option<ComplexPoint>,

    /// |alpha|, used with --alpha-arg instead of --alpha.
    #[arg(long, value_parser = parse_real)]
    pub alpha_mag: Option<f64>,

    /// arg(alpha) in radians or multiples of pi.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_angle)]
    pub alpha_arg: Option<f64>,

    /// Kerr phase per photon.
    #[arg(long, default_value = "0.01", allow_hyphen_values = true, value_parser = parse_real)]
    pub phi0: f64,

    /// Phase shifter on the probe arm.
    #[arg(long, default_value = "-pi/2", allow_hyphen_values = true, value_parser = parse_angle)]
    pub theta_ps: f64,

    /// Beam-splitter transmissivities, comma separated.
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, value_parser = parse_real, conflicts_with = "t_sweep")]
    pub t: Vec<f64>,

    /// from:to:steps over the transmissivity.
    #[arg(long, value_parser = parse_range)]
    pub t_sweep: Option<Range>,

    /// Expand the Kerr unitary to first order in phi0.
    #[arg(long)]
    pub first_order: bool,

    /// Skip the Wigner negative volume.
    #[arg(long)]
    pub no_negativity: bool,

    /// half_width:n of the square grid used for the negative volume.
    #[arg(long, default_value = "4:81", conflicts_with = "no_negativity")]
    pub neg_grid: String,

    /// Fock cutoff; chosen from |alpha| when omitted.
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(long, default_value = "figures")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Random hybrid states drawn per formula.
    #[arg(long)]
    pub draws: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,
}

/// Parses an already expanded argument list; every argument may be repeated and the last one wins.
pub fn parse<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cmd = Cli::command().args_override_self(true).mut_subcommands(|s| s.args_override_self(true));
    let matches = cmd.try_get_matches_from(argv)?;
    Cli::from_arg_matches(&matches)
}

struct Ctx<'a> {
    output: Option<&'a Path>,
    format: Option<Format>,
    policy: TailPolicy,
}

impl Ctx<'_> {
    fn format(&self) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        match self.output.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            Some("svg") => Format::Svg,
            _ => Format::Csv,
        }
    }

    /// A lone value goes to the terminal as a number unless a file or format was asked for.
    fn scalar_only(&self) -> bool {
        self.output.is_none() && self.format.is_none()
    }

    fn write(&self, text: &str) -> CliResult<()> {
        match self.output {
            Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let ctx = Ctx {
        output: cli.output.as_deref(),
        format: cli.format,
        policy: if cli.lenient { TailPolicy::Lenient } else { TailPolicy::Strict },
    };
    match &cli.command {
        Command::PhotonDist(a) => photon_dist(&ctx, a),
        Command::Mandel(a) => metric(&ctx, a, Metric::Mandel),
        Command::Skew(a) => metric(&ctx, a, Metric::Skew),
        Command::QuadSqueeze(a) => {
            let m = if a.min { Metric::QuadratureMin } else { Metric::Quadrature(a.quad_angle) };
            metric(&ctx, &a.metric, m)
        }
        Command::AsSqueeze(a) => metric(&ctx, a, Metric::AmplitudeSquared),
        Command::Wigner(a) => wigner(&ctx, a),
        Command::KerrSim(a) => kerr_sim(&ctx, a),
        Command::ReproduceFigures(a) => figures(&a.out_dir, ctx.policy),
        Command::Validate(a) => validate(&ctx, a),
    }
}

/// Line plot with the first column on the x axis and one series per remaining column.
pub fn plot_table(table: &Table, title: &str, y_label: &str, markers: bool) -> String {
    let series: Vec<Series> = table.columns[1..]
        .iter()
        .enumerate()
        .map(|(k, name)| Series {
            name: name.clone(),
            points: table.rows.iter().map(|r| (r[0].unwrap_or(f64::NAN), r[k + 1])).collect(),
        })
        .collect();
    line_plot(title, &table.columns[0], y_label, &series, markers)
}

fn emit(ctx: &Ctx, table: &Table, title: &str, y_label: &str, markers: bool) -> CliResult<()> {
    let text = match ctx.format() {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
        Format::Svg => plot_table(table, title, y_label, markers),
    };
    ctx.write(&text)
}

fn photon_dist(ctx: &Ctx, a: &PhotonArgs) -> CliResult<()> {
    let table = photon_table(&a.state.family(), a.n_max)?;
    emit(ctx, &table, "Photon number distribution", "P_n", true)
}

fn report_failures(computed: &Computed) -> CliResult<()> {
    let cells = computed.table.rows.len() * (computed.table.columns.len() - 1);
    if let Some((_, err)) = computed.failures.first().filter(|_| computed.failures.len() == cells) {
        return Err(err.clone().into());
    }
    for (point, err) in &computed.failures {
        log::warn!("{point}: {err}");
    }
    Ok(())
}

fn metric(ctx: &Ctx, a: &MetricArgs, metric: Metric) -> CliResult<()> {
    let family = a.state.family();
    let computed = match &a.sweep {
        Some(sweep) => metric_sweep(&family, sweep, metric, a.state.cutoff, ctx.policy)?,
        None => metric_points(&family, metric, a.state.cutoff, ctx.policy)?,
    };
    report_failures(&computed)?;
    if a.sweep.is_none() && family.epsilons.len() == 1 && ctx.scalar_only() {
        let value = computed.table.rows[0][1].expect("single point succeeded");
        println!("{value:.6}");
        return Ok(());
    }
    emit(ctx, &computed.table, &metric.describe(), metric.column(), a.sweep.is_none())
}

fn single_epsilon(state: &StateArgs) -> CliResult<f64> {
    match state.epsilon.as_slice() {
        [e] => Ok(*e),
        _ => Err(CliError::param("wigner takes a single --epsilon")),
    }
}

fn wigner(ctx: &Ctx, a: &WignerArgs) -> CliResult<()> {
    let family = a.state.family();
    let params = family.params(single_epsilon(&a.state)?)?;
    let cutoff = a.state.cutoff.unwrap_or_else(|| params.cutoff());
    let method = match a.method {
        MethodArg::Closed => WignerMethod::ClosedForm,
        MethodArg::Oracle => WignerMethod::ParityOracle,
    };

    if let Some(z) = a.point {
        let w = match method {
            WignerMethod::ClosedForm => wigner_closed(&params, z)?,
            WignerMethod::ParityOracle => {
                wigner_point_oracle(&build_hcs_fock(&params, cutoff, ctx.policy)?, z, ctx.policy)?
            }
        };
        if ctx.scalar_only() {
            println!("{w:.6}");
            return Ok(());
        }
        let mut table = Table::new(vec!["x".into(), "p".into(), "W".into()]);
        table.push(vec![Some(z.re), Some(z.im), Some(w)]);
        return emit(ctx, &table, "Wigner function", "W", true);
    }

    let bounds = a.grid.unwrap_or_else(|| GridBounds::default_for(params.alpha));
    let grid = match method {
        WignerMethod::ClosedForm => wigner_grid(WignerSource::Params(&params), bounds, method, ctx.policy)?,
        WignerMethod::ParityOracle => {
            let state = build_hcs_fock(&params, cutoff, ctx.policy)?;
            wigner_grid(WignerSource::State(&state), bounds, method, ctx.policy)?
        }
    };
    let mut table = grid_table(&grid);
    table
        .meta("epsilon", fmt_sig(params.epsilon))
        .meta("theta", fmt_sig(params.theta))
        .meta("phi", fmt_sig(params.phi))
        .meta("alpha", format!("{},{}", fmt_sig(params.alpha.re), fmt_sig(params.alpha.im)))
        .meta("method", if method == WignerMethod::ClosedForm { "closed" } else { "oracle" });
    if method == WignerMethod::ParityOracle {
        table.meta("cutoff", cutoff);
    }
    let text = match ctx.format() {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
        Format::Svg => {
            heatmap(&format!("W(x, p), ε={}, α={}", fmt_sig(params.epsilon), alpha_label(params.alpha)), &grid)
        }
    };
    ctx.write(&text)
}

pub fn alpha_label(a: ComplexPoint) -> String {
    if a.im == 0.0 {
        fmt_sig(a.re)
    } else {
        format!("{}{}{}i", fmt_sig(a.re), if a.im < 0.0 { "-" } else { "+" }, fmt_sig(a.im.abs()))
    }
}

fn parse_neg_grid(s: &str) -> CliResult<(f64, usize)> {
    let bad = || CliError::param(format!("invalid --neg-grid '{s}', expected half_width:n"));
    let (w, n) = s.split_once(':').ok_or_else(bad)?;
    let w = parse_real(w).map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if w <= 0.0 || n < 2 {
        return Err(bad());
    }
    Ok((w, n))
}

fn kerr_sim(ctx: &Ctx, a: &KerrArgs) -> CliResult<()> {
    let t_values = match (&a.t_sweep, a.t.is_empty()) {
        (Some(r), _) => r.values(),
        (None, false) => a.t.clone(),
        (None, true) => Range { from: 0.0, to: 1.0, steps: 11 }.values(),
    };
    let alpha = resolve_alpha(a.alpha, a.alpha_mag, a.alpha_arg);
    let mut params = KerrSchemeParams::new(alpha, a.phi0, a.theta_ps, t_values[0])?;
    if let Some(n) = a.cutoff {
        params = params.with_cutoff(n)?;
    }
    let options = SweepOptions {
        evolution: if a.first_order { Evolution::FirstOrder } else { Evolution::Exact },
        negativity_grid: if a.no_negativity { None } else { Some(parse_neg_grid(&a.neg_grid)?) },
    };
    let rows = transmissivity_sweep(&params, &t_values, options)?;

    let columns = ["t", "epsilon_fit", "success_prob", "fidelity", "Q", "S_phi0", "S_ass", "neg_volume"];
    let mut table = Table::new(columns.iter().map(|c| c.to_string()).collect());
    table
        .meta("quantity", "heralded hybrid state from the cross-Kerr scheme")
        .meta("alpha", format!("{},{}", fmt_sig(alpha.re), fmt_sig(alpha.im)))
        .meta("phi0", fmt_sig(a.phi0))
        .meta("theta_ps", fmt_sig(a.theta_ps))
        .meta("evolution", if a.first_order { "first-order" } else { "exact" })
        .meta("cutoff", params.cutoff)
        .meta("negativity_grid", if a.no_negativity { "none".to_string() } else { a.neg_grid.clone() });

    let mut first_error = None;
    for row in &rows {
        match &row.outcome {
            Ok(m) => table.push(vec![
                Some(row.t),
                Some(m.epsilon_fit),
                Some(m.success_prob),
                Some(m.fidelity),
                m.mandel_q,
                Some(m.s_phi0),
                Some(m.s_ass),
                m.neg_volume,
            ]),
            Err(e) => {
                log::warn!("t={}: {e}", fmt_sig(row.t));
                first_error.get_or_insert_with(|| e.clone());
                let mut cells = vec![None; columns.len()];
                cells[0] = Some(row.t);
                table.push(cells);
            }
        }
    }
    if let Some(e) = first_error {
        if rows.iter().all(|r| r.outcome.is_err()) {
            return Err(e.into());
        }
    }
    emit(ctx, &table, "Kerr heralding versus transmissivity", "value", true)
}

fn figures(out_dir: &Path, policy: TailPolicy) -> CliResult<()> {
    let outcomes = reproduce_figures(out_dir, policy)?;
    let mut failed = Vec::new();
    for o in &outcomes {
        match &o.result {
            Ok(files) => println!("ok     {} ({} files)", o.name, files.len()),
            Err(e) => {
                eprintln!("failed {}: {e}", o.name);
                failed.push(o.name.clone());
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Partial(format!("{} figure(s) failed: {}", failed.len(), failed.join(", "))))
    }
}

pub fn summary(report: &DiscrepancyReport) -> String {
    let mut out = String::new();
    for r in &report.rows {
        let status = match r.status {
            Status::Match => "match   ",
            Status::Mismatch => "MISMATCH",
        };
        out.push_str(&format!(
            "{status} {} [{}] {}: max abs {:.3e}, max rel {:.3e}, {} tol {:.1e}, n={}\n",
            r.formula,
            r.regime,
            r.quantity,
            r.max_abs_deviation,
            r.max_rel_deviation,
            r.tolerance_kind,
            r.tolerance,
            r.samples
        ));
    }
    let mismatches = report.discrepancies().count();
    out.push_str(&format!(
        "{} rows, {} mismatched, {} degenerate draws skipped, seed {:#x}\n",
        report.rows.len(),
        mismatches,
        report.skipped_degenerate,
        report.config.seed
    ));
    out
}

fn validate(ctx: &Ctx, a: &ValidateArgs) -> CliResult<()> {
    let mut config = AuditConfig::default();
    if let Some(d) = a.draws {
        if d == 0 {
            return Err(CliError::param("--draws must be positive"));
        }
        config.draws = d;
    }
    if let Some(s) = a.seed {
        config.seed = s;
    }
    let report = run_audit(&config)?;
    let text = summary(&report);
    match ctx.format() {
        Format::Json => {
            let json = serde_json::to_string_pretty(&report).expect("serializable report") + "\n";
            ctx.write(&json)?;
            if ctx.output.is_some() {
                print!("{text}");
            }
            Ok(())
        }
        Format::Csv if ctx.output.is_none() => {
            print!("{text}");
            Ok(())
        }
        _ => Err(CliError::param("validate writes a text summary or --format json")),
    }
}
