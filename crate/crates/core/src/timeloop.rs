//! TVD Runge–Kutta time integration.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::field::{MomentField1D, MomentField2D};
use crate::indicator::TroubledMask;
use crate::physics::ConservationLaw;
use crate::rhs::{PhaseTimings, Scheme1D, Scheme2D, SchemeError};
use crate::scalar::{lit, to_f64, Real};

/// How Δt is chosen each step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DtPolicy<T> {
    Cfl,
    /// `Δt_cfl · (h / h_ref)^(exponent − 1)`: plain CFL on the grid with
    /// spacing `reference_h`, `Δt ∝ h^exponent` under refinement.
    AccuracyScaled { exponent: T, reference_h: T },
    Fixed(T),
}

/// When the troubled-cell indicator runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IndicatorCadence {
    #[default]
    PerStage,
    /// Once per step; the mask is reused by all three stages.
    PerStep,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeConfig<T> {
    pub cfl: T,
    pub t_end: T,
    pub max_steps: usize,
    pub dt_policy: DtPolicy<T>,
    pub cadence: IndicatorCadence,
    /// Keep the flagged cell indices of every step.
    pub record_cells: bool,
}

impl<T: Real> TimeConfig<T> {
    pub fn new(cfl: T, t_end: T) -> Self {
        Self {
            cfl,
            t_end,
            max_steps: 10_000_000,
            dt_policy: DtPolicy::Cfl,
            cadence: IndicatorCadence::PerStage,
            record_cells: false,
        }
    }

    pub fn one_d(t_end: T) -> Self {
        Self::new(lit(0.6), t_end)
    }

    pub fn two_d(t_end: T) -> Self {
        Self::new(lit(0.45), t_end)
    }

    pub fn validate(&self) -> Result<(), TimeError> {
        let ok_cfl = self.cfl > T::zero() && self.cfl <= T::one();
        let ok_end = self.t_end >= T::zero() && self.t_end.is_finite();
        let ok_dt = match self.dt_policy {
            DtPolicy::Fixed(dt) => dt > T::zero() && dt.is_finite(),
            DtPolicy::AccuracyScaled { exponent, reference_h } => exponent > T::zero() && reference_h > T::zero(),
            DtPolicy::Cfl => true,
        };
        if ok_cfl && ok_end && ok_dt {
            Ok(())
        } else {
            Err(TimeError::InvalidConfig(format!(
                "cfl={} t_end={} dt_policy={:?}",
                self.cfl, self.t_end, self.dt_policy
            )))
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TimeError {
    #[error("invalid time configuration: {0}")]
    InvalidConfig(String),
    #[error("step {step}, stage {stage}: {source}")]
    Scheme { step: usize, stage: usize, source: SchemeError },
    #[error("step {step}, stage {stage}: non-finite state after update (t = {time})")]
    NonFinite { step: usize, stage: usize, time: f64 },
    #[error("step limit {0} reached before the end time")]
    MaxSteps(usize),
}

/// Spatial operator driven by the Runge–Kutta loop.
pub trait Discretization<T: Real> {
    type State: Clone;

    fn apply_boundary(&self, state: &mut Self::State, t: T);

    fn detect(&self, state: &Self::State) -> TroubledMask;

    /// Writes `L(state)` into `out`; may limit moments of `state` in place.
    fn rhs(
        &mut self,
        state: &mut Self::State,
        mask: &TroubledMask,
        t: T,
        out: &mut Self::State,
        timings: &mut PhaseTimings,
    ) -> Result<(), SchemeError>;

    /// `cfl`-scaled stable step, `None` when every wave speed is zero.
    fn cfl_dt(&self, state: &Self::State, cfl: T) -> Result<Option<T>, SchemeError>;

    /// Representative grid spacing used by [`DtPolicy::AccuracyScaled`].
    fn spacing(&self) -> T;

    /// `dst ← a·base + b·(dst + dt·rhs)`.
    fn combine(dst: &mut Self::State, a: T, base: &Self::State, b: T, dt: T, rhs: &Self::State);

    fn post_stage(&self, _state: &mut Self::State) {}

    fn is_finite(&self, state: &Self::State) -> bool;

    /// Minimum density, minimum pressure and maximum density over
    /// interior cells, if meaningful.
    fn density_pressure_bounds(&self, _state: &Self::State) -> Option<(T, T, T)> {
        None
    }

    /// Interior `(i, j)` coordinates of a padded storage index; `None`
    /// for ghost and solid cells.
    fn cell_of(&self, p: usize) -> Option<(usize, Option<usize>)>;
}

/// Indicator outcome for one Runge–Kutta stage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageRecord {
    pub step: usize,
    pub stage: usize,
    pub time: f64,
    pub flagged_count: usize,
    pub flagged_fraction: f64,
}

/// Cells flagged in at least one stage of a step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepCells {
    pub step: usize,
    pub time: f64,
    pub cells: Vec<(usize, Option<usize>)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    pub final_time: f64,
    pub stages: Vec<StageRecord>,
    pub cells: Vec<StepCells>,
    pub timings: PhaseTimings,
    pub wall: Duration,
    pub min_density: Option<f64>,
    pub min_pressure: Option<f64>,
    pub max_density: Option<f64>,
}

impl RunStats {
    /// Flagged fraction averaged over every recorded stage.
    pub fn mean_troubled_fraction(&self) -> f64 {
        if self.stages.is_empty() {
            return 0.0;
        }
        self.stages.iter().map(|s| s.flagged_fraction).sum::<f64>() / self.stages.len() as f64
    }

    fn track_extrema(&mut self, bounds: Option<(f64, f64, f64)>) {
        if let Some((rho, p, top)) = bounds {
            self.min_density = Some(self.min_density.map_or(rho, |m| m.min(rho)));
            self.min_pressure = Some(self.min_pressure.map_or(p, |m| m.min(p)));
            self.max_density = Some(self.max_density.map_or(top, |m| m.max(top)));
        }
    }
}

/// Integration failed; the state passed to [`run`] holds the last
/// completed step.
#[derive(Debug)]
pub struct RunFailure {
    pub error: TimeError,
    pub stats: RunStats,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (after {} completed steps, t = {})", self.error, self.stats.steps, self.stats.final_time)
    }
}

impl std::error::Error for RunFailure {}

/// Step size at time `t`, clipped to land on `t_end`.
pub fn compute_dt<T: Real, D: Discretization<T>>(
    disc: &D,
    state: &D::State,
    t: T,
    config: &TimeConfig<T>,
) -> Result<T, SchemeError> {
    let remaining = config.t_end - t;
    let dt = match config.dt_policy {
        DtPolicy::Fixed(dt) => Some(dt),
        DtPolicy::Cfl => disc.cfl_dt(state, config.cfl)?,
        DtPolicy::AccuracyScaled { exponent, reference_h } => disc
            .cfl_dt(state, config.cfl)?
            .map(|dt| dt * (disc.spacing() / reference_h).powf(exponent - T::one())),
    };
    Ok(match dt {
        Some(dt) if dt < remaining => dt,
        _ => remaining,
    })
}

/// Working buffers reused across steps.
pub struct Rk3<S> {
    stage: S,
    rhs: S,
}

impl<S: Clone> Rk3<S> {
    pub fn new(like: &S) -> Self {
        Self { stage: like.clone(), rhs: like.clone() }
    }
}

impl<S: Clone> Rk3<S> {
    /// Advances `u` from `t` to `t + dt`. On error `u` may hold limited
    /// moments but is otherwise the state at `t`.
    #[allow(clippy::too_many_arguments)]
    pub fn step<T: Real, D: Discretization<T, State = S>>(
        &mut self,
        disc: &mut D,
        u: &mut S,
        t: T,
        dt: T,
        step: usize,
        cadence: IndicatorCadence,
        stats: &mut RunStats,
        mut on_mask: impl FnMut(&TroubledMask),
    ) -> Result<(), TimeError> {
        let (three_q, quarter) = (lit::<T>(0.75), lit::<T>(0.25));
        let (third, two_thirds) = (T::one() / lit(3.0), lit::<T>(2.0) / lit(3.0));
        let half = lit::<T>(0.5);
        let stage_time = [t, t + dt, t + half * dt];
        let mut mask: Option<TroubledMask> = None;
        for stage in 0..3 {
            let ts = stage_time[stage];
            let clock = Instant::now();
            let target = if stage == 0 { &mut *u } else { &mut self.stage };
            disc.apply_boundary(target, ts);
            if stage == 0 || cadence == IndicatorCadence::PerStage {
                mask = Some(disc.detect(target));
            }
            let m = mask.as_ref().expect("mask computed at stage 0");
            stats.timings.indicator += clock.elapsed();
            stats.stages.push(StageRecord {
                step,
                stage: stage + 1,
                time: to_f64(ts),
                flagged_count: m.flagged,
                flagged_fraction: m.fraction(),
            });
            on_mask(m);
            disc.rhs(target, m, ts, &mut self.rhs, &mut stats.timings)
                .map_err(|source| TimeError::Scheme { step, stage: stage + 1, source })?;

            let clock = Instant::now();
            match stage {
                0 => {
                    self.stage.clone_from(u);
                    D::combine(&mut self.stage, T::zero(), u, T::one(), dt, &self.rhs);
                }
                1 => D::combine(&mut self.stage, three_q, u, quarter, dt, &self.rhs),
                _ => D::combine(&mut self.stage, third, u, two_thirds, dt, &self.rhs),
            }
            disc.post_stage(&mut self.stage);
            stats.timings.integrate += clock.elapsed();
            if !disc.is_finite(&self.stage) {
                return Err(TimeError::NonFinite { step, stage: stage + 1, time: to_f64(ts) });
            }
        }
        std::mem::swap(u, &mut self.stage);
        Ok(())
    }
}

/// Integrates `u` from `t0` to `config.t_end`.
pub fn run<T: Real, D: Discretization<T>>(
    disc: &mut D,
    u: &mut D::State,
    t0: T,
    config: &TimeConfig<T>,
) -> Result<RunStats, RunFailure> {
    let mut stats = RunStats::default();
    let fail = |error, stats| RunFailure { error, stats };
    if let Err(e) = config.validate() {
        return Err(fail(e, stats));
    }
    let start = Instant::now();
    let mut rk = Rk3::new(u);
    let mut t = t0;
    stats.final_time = to_f64(t);
    disc.apply_boundary(u, t);
    stats.track_extrema(disc.density_pressure_bounds(u).map(|(r, p, m)| (to_f64(r), to_f64(p), to_f64(m))));
    while t < config.t_end {
        if stats.steps >= config.max_steps {
            stats.wall = start.elapsed();
            return Err(fail(TimeError::MaxSteps(config.max_steps), stats));
        }
        let dt = match compute_dt(disc, u, t, config) {
            Ok(dt) => dt,
            Err(source) => {
                stats.wall = start.elapsed();
                return Err(fail(TimeError::Scheme { step: stats.steps + 1, stage: 0, source }, stats));
            }
        };
        let step = stats.steps + 1;
        let record = config.record_cells;
        let mut flagged: Vec<usize> = Vec::new();
        let r = rk.step(disc, u, t, dt, step, config.cadence, &mut stats, |m| {
            if record {
                flagged.extend(m.flags.iter().enumerate().filter(|(_, &f)| f).map(|(p, _)| p));
            }
        });
        if let Err(e) = r {
            stats.wall = start.elapsed();
            return Err(fail(e, stats));
        }
        t = if t + dt >= config.t_end || config.t_end - (t + dt) <= config.t_end.abs() * T::epsilon() {
            config.t_end
        } else {
            t + dt
        };
        stats.steps = step;
        stats.final_time = to_f64(t);
        stats.track_extrema(disc.density_pressure_bounds(u).map(|(r, p, m)| (to_f64(r), to_f64(p), to_f64(m))));
        if record {
            flagged.sort_unstable();
            flagged.dedup();
            let cells = flagged.into_iter().filter_map(|p| disc.cell_of(p)).collect();
            stats.cells.push(StepCells { step, time: to_f64(t), cells });
        }
    }
    disc.apply_boundary(u, t);
    stats.wall = start.elapsed();
    Ok(stats)
}

fn dp_bounds<T: Real, const N: usize, P: ConservationLaw<T, N>>(
    physics: &P,
    cells: impl Iterator<Item = [T; N]>,
) -> Option<(T, T, T)> {
    let mut out: Option<(T, T, T)> = None;
    for u in cells {
        let (r, p) = physics.density_pressure(&u)?;
        out = Some(match out {
            Some((mr, mp, xr)) => (mr.min(r), mp.min(p), xr.max(r)),
            None => (r, p, r),
        });
    }
    out
}

impl<T: Real, P: ConservationLaw<T, N>, const N: usize> Discretization<T> for Scheme1D<T, P, N> {
    type State = MomentField1D<T, N>;

    fn apply_boundary(&self, state: &mut Self::State, t: T) {
        Scheme1D::apply_boundary(self, state, t);
    }

    fn detect(&self, state: &Self::State) -> TroubledMask {
        Scheme1D::detect(self, state)
    }

    fn rhs(
        &mut self,
        state: &mut Self::State,
        mask: &TroubledMask,
        t: T,
        out: &mut Self::State,
        timings: &mut PhaseTimings,
    ) -> Result<(), SchemeError> {
        self.compute_rhs(state, mask, t, out, timings)
    }

    fn cfl_dt(&self, state: &Self::State, cfl: T) -> Result<Option<T>, SchemeError> {
        let alpha = self.wave_speed(state)?;
        Ok((alpha > T::zero()).then(|| cfl * self.mesh.dx / alpha))
    }

    fn spacing(&self) -> T {
        self.mesh.dx
    }

    fn combine(dst: &mut Self::State, a: T, base: &Self::State, b: T, dt: T, rhs: &Self::State) {
        dst.rk_combine(a, base, b, dt, rhs);
    }

    fn is_finite(&self, state: &Self::State) -> bool {
        state.interior_avg(&self.mesh).iter().all(crate::scalar::all_finite)
            && state.mom_x[crate::mesh::N_GHOST..crate::mesh::N_GHOST + self.mesh.n]
                .iter()
                .all(crate::scalar::all_finite)
    }

    fn density_pressure_bounds(&self, state: &Self::State) -> Option<(T, T, T)> {
        dp_bounds(&self.physics, state.interior_avg(&self.mesh).iter().copied())
    }

    fn cell_of(&self, p: usize) -> Option<(usize, Option<usize>)> {
        self.mesh.interior(p).map(|i| (i, None))
    }
}

impl<T: Real, P: ConservationLaw<T, N>, const N: usize> Discretization<T> for Scheme2D<T, P, N> {
    type State = MomentField2D<T, N>;

    fn apply_boundary(&self, state: &mut Self::State, t: T) {
        Scheme2D::apply_boundary(self, state, t);
    }

    fn detect(&self, state: &Self::State) -> TroubledMask {
        Scheme2D::detect(self, state)
    }

    fn rhs(
        &mut self,
        state: &mut Self::State,
        mask: &TroubledMask,
        t: T,
        out: &mut Self::State,
        timings: &mut PhaseTimings,
    ) -> Result<(), SchemeError> {
        self.compute_rhs(state, mask, t, out, timings)
    }

    fn cfl_dt(&self, state: &Self::State, cfl: T) -> Result<Option<T>, SchemeError> {
        let (a, b) = self.wave_speeds(state)?;
        let rate = a / self.mesh.dx + b / self.mesh.dy;
        Ok((rate > T::zero()).then(|| cfl / rate))
    }

    fn spacing(&self) -> T {
        self.mesh.dx.max(self.mesh.dy)
    }

    fn combine(dst: &mut Self::State, a: T, base: &Self::State, b: T, dt: T, rhs: &Self::State) {
        dst.rk_combine(a, base, b, dt, rhs);
    }

    fn post_stage(&self, state: &mut Self::State) {
        if let Some(fix) = &self.fix {
            fix(state, &self.mesh);
        }
    }

    fn is_finite(&self, state: &Self::State) -> bool {
        let m = &self.mesh;
        (0..m.ny as isize).all(|j| {
            (0..m.nx as isize).all(|i| {
                let p = m.idx(i, j);
                m.is_solid(i, j)
                    || (crate::scalar::all_finite(&state.avg[p])
                        && crate::scalar::all_finite(&state.mom_x[p])
                        && crate::scalar::all_finite(&state.mom_y[p]))
            })
        })
    }

    fn density_pressure_bounds(&self, state: &Self::State) -> Option<(T, T, T)> {
        let m = &self.mesh;
        let cells = (0..m.ny as isize)
            .flat_map(move |j| (0..m.nx as isize).map(move |i| (i, j)))
            .filter(|&(i, j)| !m.is_solid(i, j))
            .map(|(i, j)| state.avg[m.idx(i, j)]);
        dp_bounds(&self.physics, cells)
    }

    fn cell_of(&self, p: usize) -> Option<(usize, Option<usize>)> {
        let (i, j) = self.mesh.ij(p);
        let inside = i >= 0 && j >= 0 && (i as usize) < self.mesh.nx && (j as usize) < self.mesh.ny;
        (inside && !self.mesh.is_solid(i, j)).then_some((i as usize, Some(j as usize)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `u' = λu` on a single value.
    struct Linear {
        lambda: f64,
    }

    impl Discretization<f64> for Linear {
        type State = f64;
        fn apply_boundary(&self, _: &mut f64, _: f64) {}
        fn detect(&self, _: &f64) -> TroubledMask {
            TroubledMask::uniform(1, 1, false)
        }
        fn rhs(&mut self, s: &mut f64, _: &TroubledMask, _: f64, out: &mut f64, _: &mut PhaseTimings) -> Result<(), SchemeError> {
            *out = self.lambda * *s;
            Ok(())
        }
        fn cfl_dt(&self, _: &f64, cfl: f64) -> Result<Option<f64>, SchemeError> {
            Ok(Some(cfl * 0.1))
        }
        fn spacing(&self) -> f64 {
            0.1
        }
        fn combine(dst: &mut f64, a: f64, base: &f64, b: f64, dt: f64, rhs: &f64) {
            *dst = a * base + b * (*dst + dt * rhs);
        }
        fn is_finite(&self, s: &f64) -> bool {
            s.is_finite()
        }
        fn cell_of(&self, p: usize) -> Option<(usize, Option<usize>)> {
            Some((p, None))
        }
    }

    #[test]
    fn one_step_is_the_stability_polynomial() {
        for &(lambda, dt) in &[(-1.0, 0.1), (-3.0, 0.5), (2.0, 0.05), (-0.7, 1.3)] {
            let mut d = Linear { lambda };
            let mut u = 1.0;
            let mut rk = Rk3::new(&u);
            let mut stats = RunStats::default();
            rk.step(&mut d, &mut u, 0.0, dt, 1, IndicatorCadence::PerStage, &mut stats, |_| {}).unwrap();
            let z = lambda * dt;
            let expected = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
            assert!((u - expected).abs() <= 1e-14, "{u} vs {expected}");
            assert_eq!(stats.stages.len(), 3);
        }
    }

    #[test]
    fn zero_operator_leaves_state() {
        let mut d = Linear { lambda: 0.0 };
        let mut u = 0.375;
        let stats = run(&mut d, &mut u, 0.0, &TimeConfig::one_d(1.0)).unwrap();
        assert_eq!(u, 0.375);
        assert!(stats.steps > 0);
        assert_eq!(stats.final_time, 1.0);
    }

    #[test]
    fn landing_clips_last_step() {
        let d = Linear { lambda: -1.0 };
        let cfg = TimeConfig::one_d(1.0);
        let dt = compute_dt(&d, &1.0, 1.0 - 1e-4, &cfg).unwrap();
        assert_eq!(dt, 1.0 - (1.0 - 1e-4));
        assert!((compute_dt(&d, &1.0, 0.0, &cfg).unwrap() - 0.06).abs() < 1e-15);
    }

    #[test]
    fn accuracy_scaling_matches_reference_grid() {
        let d = Linear { lambda: -1.0 };
        let mut cfg = TimeConfig::one_d(10.0);
        cfg.dt_policy = DtPolicy::AccuracyScaled { exponent: 5.0 / 3.0, reference_h: 0.1 };
        assert!((compute_dt(&d, &1.0, 0.0, &cfg).unwrap() - 0.06).abs() < 1e-15);
        cfg.dt_policy = DtPolicy::AccuracyScaled { exponent: 5.0 / 3.0, reference_h: 0.2 };
        let expected = 0.06 * 0.5f64.powf(2.0 / 3.0);
        assert!((compute_dt(&d, &1.0, 0.0, &cfg).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn nan_aborts_and_keeps_last_state() {
        let mut d = Linear { lambda: f64::INFINITY };
        let mut u = 1.0;
        let err = run(&mut d, &mut u, 0.0, &TimeConfig::one_d(1.0)).unwrap_err();
        assert!(matches!(err.error, TimeError::NonFinite { step: 1, stage: 1, .. }));
        assert_eq!(u, 1.0);
    }

    #[test]
    fn invalid_cfl_rejected() {
        let mut d = Linear { lambda: 0.0 };
        let mut u = 0.0;
        let err = run(&mut d, &mut u, 0.0, &TimeConfig::new(1.5, 1.0)).unwrap_err();
        assert!(matches!(err.error, TimeError::InvalidConfig(_)));
    }

    #[test]
    fn max_steps_enforced() {
        let mut d = Linear { lambda: 0.0 };
        let mut u = 0.0;
        let mut cfg = TimeConfig::one_d(1.0);
        cfg.max_steps = 3;
        let err = run(&mut d, &mut u, 0.0, &cfg).unwrap_err();
        assert_eq!(err.error, TimeError::MaxSteps(3));
        assert_eq!(err.stats.steps, 3);
    }
}
