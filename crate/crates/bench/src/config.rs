//! Command-line flags, the key=value config file, and their merge.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use hweno::problems::ProblemName;
use hweno::SchemeMode;
use thiserror::Error;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "HWENO_WORKERS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: expected `key=value`, found `{text}`")]
    Syntax { path: String, line: usize, text: String },
    #[error("{path}:{line}: unknown key `{key}`")]
    UnknownKey { path: String, line: usize, key: String },
    #[error("cannot read config file {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Cli(#[from] clap::Error),
}

/// How Δt is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DtChoice {
    Cfl,
    AccuracyScaled,
    Fixed(f64),
}

impl FromStr for DtChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cfl" => Ok(DtChoice::Cfl),
            "accuracy-scaled" => Ok(DtChoice::AccuracyScaled),
            _ => {
                let bad = || format!("invalid dt policy `{s}` (expected cfl, accuracy-scaled or fixed:<dt>)");
                let dt: f64 = s.strip_prefix("fixed:").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if dt > 0.0 && dt.is_finite() {
                    Ok(DtChoice::Fixed(dt))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum TroubledDump {
    #[default]
    Summary,
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "hweno-bench", version, about = "Run hybrid HWENO benchmark problems and write CSV results")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Key=value file with defaults for any long flag; flags given on the
    /// command line win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_problem)]
    pub problem: Option<ProblemName>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<SchemeMode>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// cfl | accuracy-scaled | fixed:<dt>
    #[arg(long = "dt-policy", value_parser = DtChoice::from_str)]
    pub dt_policy: Option<DtChoice>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long = "dump-solution")]
    pub dump_solution: bool,
    /// Stage history; `=full` adds the per-step flagged cell list.
    #[arg(long = "dump-troubled", num_args = 0..=1, require_equals = true, default_missing_value = "summary")]
    pub dump_troubled: Option<TroubledDump>,
    #[arg(long = "dump-timings")]
    pub dump_timings: bool,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Comma-separated resolutions, coarsest first.
    #[arg(long, value_delimiter = ',')]
    pub convergence: Option<Vec<usize>>,
}

fn parse_problem(s: &str) -> Result<ProblemName, String> {
    s.parse::<ProblemName>().map_err(|e| e.to_string())
}

fn parse_scheme(s: &str) -> Result<SchemeMode, String> {
    s.parse()
}

const FILE_KEYS: &[&str] = &[
    "problem",
    "nx",
    "ny",
    "scheme",
    "cfl",
    "t-end",
    "dt-policy",
    "out",
    "dump-solution",
    "dump-troubled",
    "dump-timings",
    "workers",
    "convergence",
];

const FLAG_KEYS: &[&str] = &["dump-solution", "dump-timings"];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemName,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub scheme: SchemeMode,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    /// `None` means the mode's default: plain CFL for single runs,
    /// accuracy-scaled for convergence studies.
    pub dt_policy: Option<DtChoice>,
    pub out: PathBuf,
    pub dump_solution: bool,
    pub dump_troubled: Option<TroubledDump>,
    pub dump_timings: bool,
    pub workers: Option<usize>,
    pub convergence: Option<Vec<usize>>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.nx == Some(0) || self.ny == Some(0) {
            return bad("resolutions must be positive".into());
        }
        if let Some(c) = self.cfl {
            if !(c > 0.0 && c <= 1.0) {
                return bad(format!("--cfl must be in (0, 1], got {c}"));
            }
        }
        if let Some(t) = self.t_end {
            if !(t >= 0.0 && t.is_finite()) {
                return bad(format!("--t-end must be a finite non-negative time, got {t}"));
            }
        }
        if self.workers == Some(0) {
            return bad("--workers must be at least 1".into());
        }
        if let Some(ns) = &self.convergence {
            if ns.is_empty() || ns.contains(&0) {
                return bad("--convergence needs positive resolutions".into());
            }
            if ns.windows(2).any(|w| w[1] <= w[0]) {
                return bad(format!("--convergence resolutions must increase: {ns:?}"));
            }
        }
        Ok(())
    }
}

/// Turns config-file lines into long-flag arguments.
pub fn file_args(text: &str, path: &Path) -> Result<Vec<String>, ConfigError> {
    let shown = path.display().to_string();
    let mut args = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax { path: shown, line: k + 1, text: line.to_string() });
        };
        let (key, value) = (key.trim(), value.trim());
        if !FILE_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { path: shown, line: k + 1, key: key.to_string() });
        }
        if FLAG_KEYS.contains(&key) {
            match value {
                "true" => args.push(format!("--{key}")),
                "false" => {}
                _ => {
                    return Err(ConfigError::Invalid(format!(
                        "{shown}:{}: `{key}` takes true or false, found `{value}`",
                        k + 1
                    )))
                }
            }
        } else {
            args.push(format!("--{key}={value}"));
        }
    }
    Ok(args)
}

/// Parses `argv` (program name first), splicing in the config file so that
/// explicit flags override it.
pub fn parse_config<I, S>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let first = Cli::try_parse_from(&argv)?;
    let cli = match &first.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
            let mut merged = vec![argv[0].clone()];
            merged.extend(file_args(&text, path)?);
            merged.extend(argv[1..].iter().cloned());
            Cli::try_parse_from(merged)?
        }
        None => first,
    };
    let workers = match cli.workers {
        Some(w) => Some(w),
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| ConfigError::Invalid(format!("{WORKERS_ENV}=`{v}` is not a worker count")))?),
            Err(_) => None,
        },
    };
    let problem = cli
        .problem
        .ok_or_else(|| ConfigError::Invalid("missing --problem (or `problem=` in the config file)".into()))?;
    let config = RunConfig {
        problem,
        nx: cli.nx,
        ny: cli.ny,
        scheme: cli.scheme.unwrap_or(SchemeMode::Hybrid),
        cfl: cli.cfl,
        t_end: cli.t_end,
        dt_policy: cli.dt_policy,
        out: cli.out.unwrap_or_else(|| PathBuf::from("out")),
        dump_solution: cli.dump_solution,
        dump_troubled: cli.dump_troubled,
        dump_timings: cli.dump_timings,
        workers,
        convergence: cli.convergence,
    };
    config.validate()?;
    Ok(config)
}
