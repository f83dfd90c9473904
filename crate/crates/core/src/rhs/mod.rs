//! Semi-discrete right-hand sides: limiting, reconstruction and flux assembly.

use std::time::Duration;

use thiserror::Error;

use crate::hweno2d::KernelError;
use crate::physics::{Eigensystem, PhysicsError};
use crate::scalar::{lit, Real};

mod one_d;
mod two_d;

pub use one_d::Scheme1D;
pub use two_d::{CellFix2D, Scheme2D};

/// Which cells get limited moments and nonlinear interface values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeMode {
    /// Limit and reconstruct nonlinearly only around troubled cells.
    Hybrid,
    /// Limit every cell and reconstruct nonlinearly everywhere.
    LimitAll,
    /// Never limit; nonlinear interface values everywhere.
    LinearUnlimited,
}

impl SchemeMode {
    pub const ALL: [SchemeMode; 3] = [SchemeMode::Hybrid, SchemeMode::LimitAll, SchemeMode::LinearUnlimited];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeMode::Hybrid => "hybrid",
            SchemeMode::LimitAll => "limit-all",
            SchemeMode::LinearUnlimited => "linear-unlimited",
        }
    }
}

impl std::str::FromStr for SchemeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown scheme `{s}` (expected one of: hybrid, limit-all, linear-unlimited)"))
    }
}

impl std::fmt::Display for SchemeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Limit,
    Reconstruct,
    Flux,
}

#[derive(Debug, Error, PartialEq)]
pub enum SchemeError {
    #[error("inadmissible cell average at ({i}, {j}): {source}")]
    Inadmissible { i: usize, j: usize, source: PhysicsError },
    #[error("non-finite value at cell ({i}, {j}) during {phase:?}")]
    NonFinite { i: usize, j: usize, phase: Phase },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// Wall-clock time spent in each part of the update.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub indicator: Duration,
    pub limit: Duration,
    pub reconstruct: Duration,
    pub flux: Duration,
    pub integrate: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.indicator + self.limit + self.reconstruct + self.flux + self.integrate
    }

    pub fn accumulate(&mut self, other: &PhaseTimings) {
        self.indicator += other.indicator;
        self.limit += other.limit;
        self.reconstruct += other.reconstruct;
        self.flux += other.flux;
        self.integrate += other.integrate;
    }
}

/// Lax–Friedrichs flux `½(f(uL) + f(uR)) − ½α(uR − uL)`.
#[inline]
pub fn lax_friedrichs<T: Real, F, const N: usize>(ul: &[T; N], ur: &[T; N], alpha: T, flux: F) -> [T; N]
where
    F: Fn(&[T; N]) -> [T; N],
{
    let (fl, fr) = (flux(ul), flux(ur));
    let half = lit::<T>(0.5);
    std::array::from_fn(|k| half * (fl[k] + fr[k]) - half * alpha * (ur[k] - ul[k]))
}

/// Characteristic variables of each state in `values`.
pub fn characteristic_project<T: Real, const N: usize, const K: usize>(
    es: &Eigensystem<T, N>,
    values: &[[T; N]; K],
) -> [[T; N]; K] {
    values.map(|v| es.project(&v))
}

/// Conserved variables back from characteristic ones.
pub fn characteristic_unproject<T: Real, const N: usize, const K: usize>(
    es: &Eigensystem<T, N>,
    values: &[[T; N]; K],
) -> [[T; N]; K] {
    values.map(|v| es.unproject(&v))
}

/// Per-cell decisions derived from the mode and the troubled mask.
#[inline]
pub(crate) fn limits(mode: SchemeMode, flagged: bool) -> bool {
    match mode {
        SchemeMode::Hybrid => flagged,
        SchemeMode::LimitAll => true,
        SchemeMode::LinearUnlimited => false,
    }
}

#[inline]
pub(crate) fn nonlinear(mode: SchemeMode, near_trouble: bool) -> bool {
    match mode {
        SchemeMode::Hybrid => near_trouble,
        SchemeMode::LimitAll | SchemeMode::LinearUnlimited => true,
    }
}
