//! CSV schemas: solution dumps, convergence tables, troubled-cell
//! histories and phase timings.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use hweno::rhs::PhaseTimings;
use hweno::timeloop::{StageRecord, StepCells};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: io::Error },
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
}

/// Round-trippable float (17 significant digits).
pub fn exact(v: f64) -> String {
    format!("{v:.16e}")
}

/// Six significant digits in scientific notation.
pub fn sci6(v: f64) -> String {
    format!("{v:.5e}")
}

pub fn write_text(path: &Path, text: &str) -> Result<(), OutputError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|source| OutputError::Write { path: dir.display().to_string(), source })?;
        }
    }
    fs::write(path, text).map_err(|source| OutputError::Write { path: path.display().to_string(), source })
}

/// A numeric CSV table with a header row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| exact(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), OutputError> {
        write_text(path, &self.to_csv())
    }

    pub fn parse(text: &str, path: &str) -> Result<Self, OutputError> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| OutputError::Parse { path: path.into(), line: 1, message: "empty file".into() })?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            let row: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
            let row = row.map_err(|e| OutputError::Parse { path: path.into(), line: k + 2, message: e.to_string() })?;
            if row.len() != header.len() {
                return Err(OutputError::Parse {
                    path: path.into(),
                    line: k + 2,
                    message: format!("{} fields, header has {}", row.len(), header.len()),
                });
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn read(path: &Path) -> Result<Self, OutputError> {
        let text = fs::read_to_string(path).map_err(|source| OutputError::Read { path: path.display().to_string(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }
}

/// Header of a 1D dump: centre, then every average, then every moment.
pub fn header_1d(vars: &[&str]) -> Vec<String> {
    let mut h = vec!["x".to_string()];
    h.extend(vars.iter().map(|v| format!("{v}_avg")));
    h.extend(vars.iter().map(|v| format!("{v}_mom")));
    h
}

pub fn header_2d(vars: &[&str]) -> Vec<String> {
    let mut h = vec!["x".to_string(), "y".to_string()];
    h.extend(vars.iter().map(|v| format!("{v}_avg")));
    h
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    /// `"N"` in 1D and on square grids, `"NXxNY"` otherwise.
    pub label: String,
    /// Linear resolution used for the refinement ratio.
    pub n: usize,
    pub l1: f64,
    pub linf: f64,
    pub l1_order: Option<f64>,
    pub linf_order: Option<f64>,
    pub troubled_fraction: f64,
    pub wall_seconds: f64,
}

/// `log(e_coarse / e_fine) / log(n_fine / n_coarse)`; undefined for
/// vanishing errors.
pub fn order(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> Option<f64> {
    let o = (e_coarse / e_fine).ln() / (n_fine as f64 / n_coarse as f64).ln();
    (e_coarse > 0.0 && e_fine > 0.0 && o.is_finite()).then_some(o)
}

/// Fills the order columns of `rows` from consecutive pairs.
pub fn fill_orders(rows: &mut [ConvergenceRow]) {
    for k in 0..rows.len() {
        if k == 0 {
            rows[k].l1_order = None;
            rows[k].linf_order = None;
            continue;
        }
        let (a, b) = (&rows[k - 1], &rows[k]);
        let l1 = order(a.l1, b.l1, a.n, b.n);
        let linf = order(a.linf, b.linf, a.n, b.n);
        rows[k].l1_order = l1;
        rows[k].linf_order = linf;
    }
}

pub const CONVERGENCE_HEADER: &str = "N,L1,L1_order,Linf,Linf_order,troubled_fraction,wall_seconds";

/// Orders in the file are recomputed from the errors as printed, so the
/// order columns agree with the error columns a reader sees.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let printed = |v: f64| sci6(v).parse::<f64>().unwrap_or(v);
    let opt = |v: Option<f64>| v.map(sci6).unwrap_or_default();
    let mut s = format!("{CONVERGENCE_HEADER}\n");
    for (k, r) in rows.iter().enumerate() {
        let (l1_order, linf_order) = match k.checked_sub(1).map(|q| &rows[q]) {
            Some(a) => (
                order(printed(a.l1), printed(r.l1), a.n, r.n),
                order(printed(a.linf), printed(r.linf), a.n, r.n),
            ),
            None => (None, None),
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.label,
            sci6(r.l1),
            opt(l1_order),
            sci6(r.linf),
            opt(linf_order),
            sci6(r.troubled_fraction),
            sci6(r.wall_seconds)
        );
    }
    s
}

pub const HISTORY_HEADER: &str = "step,stage,time,flagged_count,flagged_fraction";

pub fn history_csv(stages: &[StageRecord]) -> String {
    let mut s = format!("{HISTORY_HEADER}\n");
    for r in stages {
        let _ = writeln!(s, "{},{},{},{},{}", r.step, r.stage, exact(r.time), r.flagged_count, exact(r.flagged_fraction));
    }
    s
}

pub fn cells_csv(cells: &[StepCells], two_d: bool) -> String {
    let mut s = String::from(if two_d { "step,time,i,j\n" } else { "step,time,i\n" });
    for step in cells {
        let t = exact(step.time);
        for &(i, j) in &step.cells {
            match j {
                Some(j) => {
                    let _ = writeln!(s, "{},{t},{i},{j}", step.step);
                }
                None => {
                    let _ = writeln!(s, "{},{t},{i}", step.step);
                }
            }
        }
    }
    s
}

pub const TIMINGS_HEADER: &str = "N,indicator,limit,reconstruct,flux,integrate,total,wall";

pub fn timings_row(label: &str, t: &PhaseTimings, wall: f64) -> String {
    let secs = |d: std::time::Duration| exact(d.as_secs_f64());
    format!(
        "{label},{},{},{},{},{},{},{}\n",
        secs(t.indicator),
        secs(t.limit),
        secs(t.reconstruct),
        secs(t.flux),
        secs(t.integrate),
        secs(t.total()),
        exact(wall)
    )
}
