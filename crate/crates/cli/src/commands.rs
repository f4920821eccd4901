//! One function per subcommand. Each returns whether every checked bound
//! held; reports go to `--out` or stdout, and the human summary goes to
//! stdout, or to stderr when stdout carries the report.

use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use lgbounds_core::operator::{sigma_z, Slot};
use lgbounds_core::search::{
    best_grid_point, grid_sweep, maximize_violation, monte_carlo_verify, CompassOptions, Objective,
    RandomInstanceConfig, SearchOutcome, SweepResult, TimeRange, VerificationReport,
    SCHEMA_VERSION,
};
use lgbounds_core::spin::figure_data;
use lgbounds_core::{
    evaluate_bipartite, maximally_mixed, tensor_lift, BipartiteObservables, SweepGrid, TSIRELSON,
};

use crate::config::{Command, Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{csv_string, emit, fmt_g, num_row, write_file};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Violation,
}

impl Outcome {
    fn from_violation(violated: bool) -> Self {
        if violated {
            Outcome::Violation
        } else {
            Outcome::Pass
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Violation => 2,
        }
    }
}

pub struct Streams<'a> {
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

impl Streams<'_> {
    /// Where the human summary goes given where the report goes.
    fn summary(&mut self, report_to_stdout: bool) -> &mut dyn Write {
        if report_to_stdout {
            &mut *self.stderr
        } else {
            &mut *self.stdout
        }
    }
}

pub fn run_command(cfg: &RunConfig, io: &mut Streams<'_>) -> CliResult<Outcome> {
    match cfg.command {
        Command::SpinDemo => cmd_spin_demo(cfg, io),
        Command::Sweep => cmd_sweep(cfg, io),
        Command::Verify => cmd_verify(cfg, io),
        Command::Search => cmd_search(cfg, io),
        Command::BlgDemo => cmd_blg_demo(cfg, io),
    }
}

/// Nine decimals, with values that round to zero shown as `0.000000000`.
fn fixed9(v: f64) -> String {
    let v = if v.abs() < 5e-10 { 0.0 } else { v };
    format!("{v:.9}")
}

fn grid(cfg: &RunConfig) -> CliResult<SweepGrid> {
    let (lo, hi) = cfg.t_range;
    Ok(SweepGrid::uniform(cfg.grid_steps, lo, hi, cfg.omega)?)
}

fn time_range(cfg: &RunConfig) -> CliResult<TimeRange> {
    let (lo, hi) = cfg.t_range;
    Ok(TimeRange::new(lo, hi)?)
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn schedule_text(times: &[f64; 4]) -> String {
    let parts: Vec<String> = times.iter().map(|&t| fixed9(t)).collect();
    format!("({})", parts.join(", "))
}

pub const FIG_D1: &str = "fig1a.csv";
pub const FIG_D2: &str = "fig1b.csv";
pub const FIG_SPHERE: &str = "fig1c.csv";

/// D1 and D2 surfaces and sphere coordinates over the grid.
pub fn cmd_spin_demo(cfg: &RunConfig, io: &mut Streams<'_>) -> CliResult<Outcome> {
    let grid = grid(cfg)?;
    let rows = figure_data(&grid);
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;

    let surface = |value: fn(&lgbounds_core::FigureRow) -> f64| {
        csv_string(
            &["t2", "t3", "t4", "value"],
            rows.iter().map(|r| num_row(&[r.t2, r.t3, r.t4, value(r)])),
        )
    };
    write_file(&dir.join(FIG_D1), &surface(|r| r.d1))?;
    write_file(&dir.join(FIG_D2), &surface(|r| r.d2))?;
    write_file(
        &dir.join(FIG_SPHERE),
        &csv_string(
            &["L_norm", "c13_norm", "c24_norm"],
            rows.iter()
                .map(|r| num_row(&[r.l_norm, r.c13_norm, r.c24_norm])),
        ),
    )?;

    let min_d1 = rows.iter().map(|r| r.d1).fold(f64::INFINITY, f64::min);
    let min_d2 = rows.iter().map(|r| r.d2).fold(f64::INFINITY, f64::min);
    let max_norm = rows.iter().map(|r| r.sphere_norm()).fold(0.0, f64::max);
    writeln!(
        io.stdout,
        "min D1 = {}, min D2 = {}, max sphere norm = {}",
        fixed9(min_d1),
        fixed9(min_d2),
        fixed9(max_norm)
    )?;
    writeln!(
        io.stderr,
        "wrote {} rows each to {}",
        rows.len(),
        [FIG_D1, FIG_D2, FIG_SPHERE]
            .map(|f| dir.join(f).display().to_string())
            .join(", ")
    )?;
    Ok(Outcome::from_violation(
        min_d1 < -cfg.tol || min_d2 < -cfg.tol || max_norm * max_norm > 1.0 + cfg.tol,
    ))
}

fn sweep_csv(r: &SweepResult) -> String {
    let row = |name: &str, s: &lgbounds_core::search::InequalitySweep| {
        let mut cells = vec![name.to_owned(), fmt_g(s.min_margin)];
        cells.extend(s.argmin.iter().map(|&t| fmt_g(t)));
        cells.push(s.boundary_cases.to_string());
        cells
    };
    csv_string(
        &[
            "inequality",
            "min_margin",
            "t1",
            "t2",
            "t3",
            "t4",
            "boundary_cases",
        ],
        [
            row("theorem1", &r.theorem1),
            row("theorem2", &r.theorem2),
            row("theorem3", &r.theorem3),
        ],
    )
}

/// Exhaustive grid sweep of D1, D2 and the complementarity margin.
pub fn cmd_sweep(cfg: &RunConfig, io: &mut Streams<'_>) -> CliResult<Outcome> {
    let grid = grid(cfg)?;
    let result = grid_sweep(cfg.model.sweep(), &grid)?;
    let body = match cfg.format {
        Format::Json => to_json(&result)?,
        Format::Csv => sweep_csv(&result),
    };
    emit(cfg.out.as_deref(), &body, io.stdout)?;

    let out = io.summary(cfg.out.is_none());
    write!(
        out,
        "points = {}, min D1 = {}, min D2 = {}, min complementarity margin = {}, \
         max sphere norm = {}",
        result.points,
        fixed9(result.theorem1.min_margin),
        fixed9(result.theorem2.min_margin),
        fixed9(result.theorem3.min_margin),
        fixed9(result.max_sphere_norm),
    )?;
    if let Some(d) = result.cross_model_deviation {
        write!(out, ", max deviation from closed form = {d:.3e}")?;
    }
    writeln!(out)?;
    let deviates = result.cross_model_deviation.is_some_and(|d| d > cfg.tol);
    Ok(Outcome::from_violation(
        result.min_margin() < -cfg.tol || deviates,
    ))
}

fn verify_csv(r: &VerificationReport) -> String {
    let m = &r.margins;
    let opt = |v: Option<f64>| v.map(fmt_g).unwrap_or_default();
    csv_string(
        &["inequality", "count", "min", "mean"],
        [
            ("theorem1", &m.theorem1),
            ("theorem2", &m.theorem2),
            ("theorem3", &m.theorem3),
            ("theorem4", &m.theorem4),
            ("intermediates", &m.intermediates),
            ("appendix", &m.appendix),
        ]
        .map(|(name, s)| {
            vec![
                name.to_owned(),
                s.count.to_string(),
                opt(s.min),
                opt(s.mean),
            ]
        }),
    )
}

fn run_monte_carlo(cfg: &RunConfig) -> CliResult<VerificationReport> {
    let instances = RandomInstanceConfig::new(cfg.dim, cfg.seed);
    Ok(monte_carlo_verify(
        &instances,
        cfg.samples,
        time_range(cfg)?,
    )?)
}

fn min_margin(r: &VerificationReport) -> Option<f64> {
    let m = &r.margins;
    [
        m.theorem1,
        m.theorem2,
        m.theorem3,
        m.theorem4,
        m.intermediates,
        m.appendix,
    ]
    .iter()
    .filter_map(|s| s.min)
    .reduce(f64::min)
}

/// Monte-Carlo verification of every bound on seeded random instances.
pub fn cmd_verify(cfg: &RunConfig, io: &mut Streams<'_>) -> CliResult<Outcome> {
    let report = run_monte_carlo(cfg)?;
    let body = match cfg.format {
        Format::Json => to_json(&report)?,
        Format::Csv => verify_csv(&report),
    };
    emit(cfg.out.as_deref(), &body, io.stdout)?;
    writeln!(
        io.summary(cfg.out.is_none()),
        "samples = {}, skipped degenerate = {}, psd failures = {}, violations = {}, \
         min margin = {}",
        report.samples,
        report.skipped_degenerate,
        report.psd_failures,
        report.violations,
        min_margin(&report).map_or("n/a".into(), fixed9),
    )?;
    Ok(Outcome::from_violation(report.has_violation(cfg.tol)))
}

fn search_csv(o: &SearchOutcome) -> String {
    let mut cells = vec![fmt_g(o.value)];
    cells.extend(o.schedule.times.iter().map(|&t| fmt_g(t)));
    cells.push(fmt_g(o.start_value));
    cells.push(o.iterations.to_string());
    csv_string(
        &["value", "t1", "t2", "t3", "t4", "start_value", "iterations"],
        [cells],
    )
}

fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::NegMarginTh1 => "neg_margin_th1",
        Objective::NegMarginTh2 => "neg_margin_th2",
        Objective::NegMarginTh4 => "neg_margin_th4",
        Objective::LValue => "L_value",
    }
}

/// Grid prescan for the best start, then compass refinement.
pub fn cmd_search(cfg: &RunConfig, io: &mut Streams<'_>) -> CliResult<Outcome> {
    let model = cfg.model.search();
    let (start, _) = best_grid_point(cfg.objective, model, &grid(cfg)?)?;
    let outcome = maximize_violation(cfg.objective, start, model, CompassOptions::default())?;
    let body = match cfg.format {
        Format::Json => to_json(&outcome)?,
        Format::Csv => search_csv(&outcome),
    };
    emit(cfg.out.as_deref(), &body, io.stdout)?;
    writeln!(
        io.summary(cfg.out.is_none()),
        "objective = {}, optimum = {} at t = {}, start value = {}, iterations = {}",
        objective_name(cfg.objective),
        fixed9(outcome.value),
        schedule_text(&outcome.schedule.times),
        fixed9(outcome.start_value),
        outcome.iterations,
    )?;
    let found_violation = cfg.objective != Objective::LValue && outcome.value > cfg.tol;
    Ok(Outcome::from_violation(found_violation))
}

#[derive(Debug, Clone, Copy, Serialize)]
struct WorkedExample {
    blg: f64,
    bound: f64,
    margin: f64,
}

#[derive(Debug, Serialize)]
struct BlgReport<'a> {
    schema_version: u32,
    worked_example: WorkedExample,
    monte_carlo: &'a VerificationReport,
}

/// `sigma_z` on each qubit of the maximally mixed two-qubit state, measured
/// twice without dynamics.
fn worked_example() -> CliResult<WorkedExample> {
    let a = tensor_lift(&sigma_z(), Slot::First, 2);
    let b = tensor_lift(&sigma_z(), Slot::Second, 2);
    let ops = BipartiteObservables {
        a1: a.clone(),
        a2: a,
        b1: b.clone(),
        b2: b,
    };
    let e = evaluate_bipartite(&maximally_mixed(4), &ops)?;
    Ok(WorkedExample {
        blg: e.blg,
        bound: e.theorem4.rhs,
        margin: e.theorem4.margin,
    })
}

/// The two-qubit worked example, then bipartite Monte-Carlo runs.
pub fn cmd_blg_demo(cfg: &RunConfig, io: &mut Streams<'_>) -> CliResult<Outcome> {
    if RandomInstanceConfig::new(cfg.dim, cfg.seed)
        .bipartite_split()
        .is_none()
    {
        return Err(CliError::Config(format!(
            "blg-demo needs a composite dimension, got {}",
            cfg.dim
        )));
    }
    let example = worked_example()?;
    let report = run_monte_carlo(cfg)?;
    let body = match cfg.format {
        Format::Json => to_json(&BlgReport {
            schema_version: SCHEMA_VERSION,
            worked_example: example,
            monte_carlo: &report,
        })?,
        Format::Csv => verify_csv(&report),
    };
    emit(cfg.out.as_deref(), &body, io.stdout)?;

    let out = io.summary(cfg.out.is_none());
    writeln!(
        out,
        "worked example: BLG = {}, bound = {} (2*sqrt(2) = {})",
        fixed9(example.blg),
        fixed9(example.bound),
        fixed9(TSIRELSON)
    )?;
    let t4 = &report.margins.theorem4;
    writeln!(
        out,
        "bipartite runs: {} instances at dim {}, min margin = {}, max BLG = {}",
        t4.count,
        cfg.dim,
        t4.min.map_or("n/a".into(), fixed9),
        report.max_blg.map_or("n/a".into(), fixed9),
    )?;
    let over_ceiling = report.max_blg.is_some_and(|b| b > TSIRELSON + cfg.tol);
    Ok(Outcome::from_violation(
        report.has_violation(cfg.tol) || over_ceiling || example.margin < -cfg.tol,
    ))
}
