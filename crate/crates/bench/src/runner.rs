//! Run orchestration over the preset catalog.

use std::path::Path;

use hweno::field::{MomentField1D, MomentField2D};
use hweno::physics::ConservationLaw;
use hweno::problems::{build, Preset, Preset1D, Preset2D, ProblemError, ProblemName};
use hweno::timeloop::{run, DtPolicy, RunStats, TimeConfig};
use hweno::SchemeMode;
use thiserror::Error;

use crate::config::{DtChoice, RunConfig, TroubledDump};
use crate::output::{self, ConvergenceRow, OutputError, Table};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error("{problem} has no exact solution; convergence studies need one")]
    NoOracle { problem: ProblemName },
    #[error("cannot start {0} workers: {1}")]
    Pool(usize, String),
    #[error("{problem} at {label}: {message}")]
    Failed { problem: ProblemName, label: String, message: String },
}

/// Grid size of one run; `ny` is absent in 1D.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub nx: usize,
    pub ny: Option<usize>,
}

impl Resolution {
    pub fn label(&self) -> String {
        match self.ny {
            Some(ny) if ny != self.nx => format!("{}x{ny}", self.nx),
            _ => self.nx.to_string(),
        }
    }
}

/// Time-stepping choices shared by every run of an invocation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSettings {
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: DtChoice,
    /// Linear resolution whose plain CFL step anchors accuracy scaling;
    /// `None` uses the catalog resolution.
    pub reference_n: Option<usize>,
    pub record_cells: bool,
}

impl Default for TimeSettings {
    fn default() -> Self {
        Self { cfl: None, t_end: None, dt: DtChoice::Cfl, reference_n: None, record_cells: false }
    }
}

/// Outcome of one integration. `failure` is set when the run stopped early;
/// `solution` then holds the last completed step.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub problem: ProblemName,
    pub resolution: Resolution,
    pub stats: RunStats,
    pub errors: Option<(f64, f64)>,
    pub solution: Table,
    pub initial_totals: Vec<f64>,
    pub final_totals: Vec<f64>,
    pub failure: Option<String>,
}

impl RunResult {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }

    /// Largest relative change of a conserved total.
    pub fn conservation_drift(&self) -> f64 {
        self.initial_totals
            .iter()
            .zip(&self.final_totals)
            .map(|(a, b)| (b - a).abs() / a.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

pub fn var_names(preset: &Preset<f64>) -> &'static [&'static str] {
    match preset {
        Preset::Scalar1D(_) | Preset::Scalar2D(_) => &["u"],
        Preset::Euler1D(_) => &["rho", "rhou", "E"],
        Preset::Euler2D(_) => &["rho", "rhou", "rhov", "E"],
    }
}

/// Catalog resolution, or `nx` with `ny` following the catalog aspect ratio.
pub fn resolution(preset: &Preset<f64>, nx: Option<usize>, ny: Option<usize>) -> Resolution {
    match preset {
        Preset::Scalar1D(p) => Resolution { nx: nx.unwrap_or(p.n), ny: None },
        Preset::Euler1D(p) => Resolution { nx: nx.unwrap_or(p.n), ny: None },
        Preset::Scalar2D(p) => aspect(p.nx, p.ny, nx, ny),
        Preset::Euler2D(p) => aspect(p.nx, p.ny, nx, ny),
    }
}

fn aspect(nx0: usize, ny0: usize, nx: Option<usize>, ny: Option<usize>) -> Resolution {
    let nx = nx.unwrap_or(nx0);
    let ny = ny.unwrap_or_else(|| (nx * ny0).div_ceil(nx0).max(1));
    Resolution { nx, ny: Some(ny) }
}

fn exponent(preset: &Preset<f64>) -> f64 {
    match preset {
        Preset::Scalar1D(_) | Preset::Euler1D(_) => 5.0 / 3.0,
        Preset::Scalar2D(_) | Preset::Euler2D(_) => 4.0 / 3.0,
    }
}

fn spacing(preset: &Preset<f64>, n: usize) -> f64 {
    match preset {
        Preset::Scalar1D(p) => (p.x_hi - p.x_lo) / n as f64,
        Preset::Euler1D(p) => (p.x_hi - p.x_lo) / n as f64,
        Preset::Scalar2D(p) => {
            let r = aspect(p.nx, p.ny, Some(n), None);
            ((p.x_hi - p.x_lo) / n as f64).max((p.y_hi - p.y_lo) / r.ny.unwrap() as f64)
        }
        Preset::Euler2D(p) => {
            let r = aspect(p.nx, p.ny, Some(n), None);
            ((p.x_hi - p.x_lo) / n as f64).max((p.y_hi - p.y_lo) / r.ny.unwrap() as f64)
        }
    }
}

fn time_config(preset: &Preset<f64>, cfl: f64, settings: &TimeSettings) -> TimeConfig<f64> {
    let mut cfg = TimeConfig::new(settings.cfl.unwrap_or(cfl), settings.t_end.unwrap_or(preset.t_end()));
    cfg.record_cells = settings.record_cells;
    cfg.dt_policy = match settings.dt {
        DtChoice::Cfl => DtPolicy::Cfl,
        DtChoice::Fixed(dt) => DtPolicy::Fixed(dt),
        DtChoice::AccuracyScaled => {
            let n = settings.reference_n.unwrap_or_else(|| resolution(preset, None, None).nx);
            DtPolicy::AccuracyScaled { exponent: exponent(preset), reference_h: spacing(preset, n) }
        }
    };
    cfg
}

fn finish(outcome: Result<RunStats, hweno::timeloop::RunFailure>) -> (RunStats, Option<String>) {
    match outcome {
        Ok(s) => (s, None),
        Err(f) => {
            let message = f.to_string();
            (f.stats, Some(message))
        }
    }
}

/// Errors are simply absent once the exact solution stops being defined.
fn available(norms: Result<(f64, f64), ProblemError>) -> Result<Option<(f64, f64)>, RunError> {
    match norms {
        Ok(e) => Ok(Some(e)),
        Err(ProblemError::PastBreaking { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn solve_1d<P, const N: usize>(
    preset: &Preset1D<f64, P, N>,
    vars: &[&str],
    cfg: &TimeConfig<f64>,
    n: usize,
    mode: SchemeMode,
) -> Result<RunResult, RunError>
where
    P: ConservationLaw<f64, N> + Clone,
{
    let mesh = preset.mesh(n)?;
    let mut field: MomentField1D<f64, N> = preset.initial_field(&mesh)?;
    let initial_totals = field.conserved_totals(&mesh).to_vec();
    let mut scheme = preset.scheme(mesh.clone(), mode)?;
    let resolution = Resolution { nx: n, ny: None };
    let (stats, failure) = finish(run(&mut scheme, &mut field, 0.0, cfg));
    let errors = match (&preset.exact, &failure) {
        (Some(_), None) => available(preset.error_norms(&field, &mesh, stats.final_time))?,
        _ => None,
    };
    let rows = (0..n)
        .map(|i| {
            let p = mesh.padded(i);
            let mut row = vec![mesh.center(i)];
            row.extend_from_slice(&field.avg[p]);
            row.extend_from_slice(&field.mom_x[p]);
            row
        })
        .collect();
    Ok(RunResult {
        problem: preset.name,
        resolution,
        errors,
        solution: Table { header: output::header_1d(vars), rows },
        initial_totals,
        final_totals: field.conserved_totals(&mesh).to_vec(),
        stats,
        failure,
    })
}

fn solve_2d<P, const N: usize>(
    preset: &Preset2D<f64, P, N>,
    vars: &[&str],
    cfg: &TimeConfig<f64>,
    res: Resolution,
    mode: SchemeMode,
) -> Result<RunResult, RunError>
where
    P: ConservationLaw<f64, N> + Clone,
{
    let ny = res.ny.unwrap_or(res.nx);
    let mesh = preset.mesh(res.nx, ny)?;
    let mut field: MomentField2D<f64, N> = preset.initial_field(&mesh)?;
    let initial_totals = field.conserved_totals(&mesh).to_vec();
    let mut scheme = preset.scheme(mesh.clone(), mode)?;
    let (stats, failure) = finish(run(&mut scheme, &mut field, 0.0, cfg));
    let errors = match (&preset.exact, &failure) {
        (Some(_), None) => available(preset.error_norms(&field, &mesh, stats.final_time))?,
        _ => None,
    };
    let mut rows = Vec::with_capacity(res.nx * ny);
    for j in 0..ny as isize {
        for i in 0..res.nx as isize {
            if mesh.is_solid(i, j) {
                continue;
            }
            let (x, y) = mesh.center(i, j);
            let mut row = vec![x, y];
            row.extend_from_slice(&field.avg[mesh.idx(i, j)]);
            rows.push(row);
        }
    }
    Ok(RunResult {
        problem: preset.name,
        resolution: Resolution { nx: res.nx, ny: Some(ny) },
        errors,
        solution: Table { header: output::header_2d(vars), rows },
        initial_totals,
        final_totals: field.conserved_totals(&mesh).to_vec(),
        stats,
        failure,
    })
}

/// Integrates one preset at one resolution on the current thread pool.
pub fn solve(preset: &Preset<f64>, res: Resolution, mode: SchemeMode, settings: &TimeSettings) -> Result<RunResult, RunError> {
    let vars = var_names(preset);
    match preset {
        Preset::Scalar1D(p) => solve_1d(p, vars, &time_config(preset, p.cfl, settings), res.nx, mode),
        Preset::Euler1D(p) => solve_1d(p, vars, &time_config(preset, p.cfl, settings), res.nx, mode),
        Preset::Scalar2D(p) => solve_2d(p, vars, &time_config(preset, p.cfl, settings), res, mode),
        Preset::Euler2D(p) => solve_2d(p, vars, &time_config(preset, p.cfl, settings), res, mode),
    }
}

/// Runs `f` on a pool of `workers` threads, or the global pool.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, RunError> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w).build().map_err(|e| RunError::Pool(w, e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// One run per resolution with accuracy-scaled Δt anchored at the coarsest
/// grid, plus the error table.
pub fn run_convergence(
    problem: ProblemName,
    ns: &[usize],
    mode: SchemeMode,
    settings: &TimeSettings,
) -> Result<(Vec<ConvergenceRow>, Vec<RunResult>), RunError> {
    let preset = build::<f64>(problem);
    if !problem.has_exact() {
        return Err(RunError::NoOracle { problem });
    }
    let settings = TimeSettings { reference_n: settings.reference_n.or(ns.first().copied()), ..*settings };
    let mut rows = Vec::with_capacity(ns.len());
    let mut results = Vec::with_capacity(ns.len());
    for &n in ns {
        let res = resolution(&preset, Some(n), None);
        let r = solve(&preset, res, mode, &settings)?;
        if let Some(message) = &r.failure {
            return Err(RunError::Failed { problem, label: res.label(), message: message.clone() });
        }
        let Some((l1, linf)) = r.errors else {
            let message = format!("no exact solution at t = {}", r.stats.final_time);
            return Err(RunError::Failed { problem, label: res.label(), message });
        };
        rows.push(ConvergenceRow {
            label: res.label(),
            n,
            l1,
            linf,
            l1_order: None,
            linf_order: None,
            troubled_fraction: r.stats.mean_troubled_fraction(),
            wall_seconds: r.stats.wall.as_secs_f64(),
        });
        results.push(r);
    }
    output::fill_orders(&mut rows);
    Ok((rows, results))
}

/// What an invocation produced; `failure` decides the exit status.
#[derive(Debug)]
pub struct Report {
    pub lines: Vec<String>,
    pub failure: Option<String>,
}

fn write_run_outputs(config: &RunConfig, r: &RunResult, suffix: &str, timings: &mut String) -> Result<(), RunError> {
    let dir = &config.out;
    let two_d = r.resolution.ny.is_some();
    if config.dump_solution {
        r.solution.write(&dir.join(format!("solution{suffix}.csv")))?;
    }
    if let Some(kind) = config.dump_troubled {
        output::write_text(&dir.join(format!("troubled_history{suffix}.csv")), &output::history_csv(&r.stats.stages))?;
        if kind == TroubledDump::Full {
            output::write_text(&dir.join(format!("troubled_cells{suffix}.csv")), &output::cells_csv(&r.stats.cells, two_d))?;
        }
    }
    timings.push_str(&output::timings_row(&r.resolution.label(), &r.stats.timings, r.stats.wall.as_secs_f64()));
    Ok(())
}

fn summary(r: &RunResult) -> String {
    let mut s = format!(
        "{} {} steps={} t={} troubled={:.4}%",
        r.problem,
        r.resolution.label(),
        r.stats.steps,
        r.stats.final_time,
        100.0 * r.stats.mean_troubled_fraction()
    );
    if let Some((l1, linf)) = r.errors {
        s.push_str(&format!(" L1={l1:.6e} Linf={linf:.6e}"));
    }
    if let (Some(rho), Some(p), Some(top)) = (r.stats.min_density, r.stats.min_pressure, r.stats.max_density) {
        s.push_str(&format!(" min_rho={rho:.6e} max_rho={top:.6e} min_p={p:.6e}"));
    }
    s.push_str(&format!(" wall={:.3}s", r.stats.wall.as_secs_f64()));
    s
}

/// Executes a parsed configuration and writes its CSV files under
/// `config.out`.
pub fn execute(config: &RunConfig) -> Result<Report, RunError> {
    let settings = TimeSettings {
        cfl: config.cfl,
        t_end: config.t_end,
        dt: config.dt_policy.unwrap_or(if config.convergence.is_some() { DtChoice::AccuracyScaled } else { DtChoice::Cfl }),
        reference_n: None,
        record_cells: config.dump_troubled == Some(TroubledDump::Full),
    };
    let mut timings = format!("{}\n", output::TIMINGS_HEADER);
    let report = with_workers(config.workers, || -> Result<Report, RunError> {
        match &config.convergence {
            Some(ns) => {
                let (rows, results) = run_convergence(config.problem, ns, config.scheme, &settings)?;
                output::write_text(&config.out.join("convergence.csv"), &output::convergence_csv(&rows))?;
                let mut lines = Vec::new();
                for r in &results {
                    write_run_outputs(config, r, &format!("_{}", r.resolution.label()), &mut timings)?;
                    lines.push(summary(r));
                }
                Ok(Report { lines, failure: None })
            }
            None => {
                let preset = build::<f64>(config.problem);
                let res = resolution(&preset, config.nx, config.ny);
                let r = solve(&preset, res, config.scheme, &settings)?;
                write_run_outputs(config, &r, "", &mut timings)?;
                Ok(Report { lines: vec![summary(&r)], failure: r.failure.clone() })
            }
        }
    })??;
    if config.dump_timings {
        output::write_text(&config.out.join("timings.csv"), &timings)?;
    }
    Ok(report)
}

/// Reads a solution dump written by [`execute`].
pub fn read_solution(path: &Path) -> Result<Table, RunError> {
    Ok(Table::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolutions_follow_catalog_aspect() {
        let dmr = build::<f64>(ProblemName::Dmr);
        assert_eq!(resolution(&dmr, None, None), Resolution { nx: 480, ny: Some(120) });
        assert_eq!(resolution(&dmr, Some(240), None), Resolution { nx: 240, ny: Some(60) });
        assert_eq!(resolution(&dmr, Some(240), Some(7)).label(), "240x7");
        let lax = build::<f64>(ProblemName::Lax);
        assert_eq!(resolution(&lax, None, None), Resolution { nx: 200, ny: None });
        assert_eq!(resolution(&build::<f64>(ProblemName::Vortex), Some(40), None).label(), "40");
    }

    #[test]
    fn accuracy_scaling_anchors_at_reference() {
        let p = build::<f64>(ProblemName::Burgers1D);
        let s = TimeSettings { dt: DtChoice::AccuracyScaled, reference_n: Some(10), ..Default::default() };
        let cfg = time_config(&p, 0.6, &s);
        assert_eq!(cfg.dt_policy, DtPolicy::AccuracyScaled { exponent: 5.0 / 3.0, reference_h: 0.2 });
        assert_eq!(cfg.cfl, 0.6);
        let q = build::<f64>(ProblemName::Euler2DWave);
        let cfg = time_config(&q, 0.45, &TimeSettings { dt: DtChoice::AccuracyScaled, ..Default::default() });
        assert_eq!(cfg.dt_policy, DtPolicy::AccuracyScaled { exponent: 4.0 / 3.0, reference_h: 2.0 / 80.0 });
    }

    #[test]
    fn convergence_refuses_presets_without_exact_solution() {
        let e = run_convergence(ProblemName::Lax, &[50, 100], SchemeMode::Hybrid, &TimeSettings::default()).unwrap_err();
        assert!(e.to_string().contains("lax") && e.to_string().contains("exact"));
    }

    #[test]
    fn zero_time_errors_vanish() {
        let s = TimeSettings { t_end: Some(0.0), ..Default::default() };
        let (rows, results) = run_convergence(ProblemName::Burgers1D, &[8, 16], SchemeMode::Hybrid, &s).unwrap();
        assert_eq!(results[0].stats.steps, 0);
        for r in &rows {
            assert!(r.l1 < 1e-15 && r.linf < 1e-15, "{r:?}");
        }
        let (rows, _) = run_convergence(ProblemName::Euler2DWave, &[6], SchemeMode::Hybrid, &s).unwrap();
        assert!(rows[0].l1 < 1e-15);
    }
}
