//! Benchmark presets and exact-solution oracles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Boundary1D, Boundary2D, BoundaryKind, FieldError, GhostRule, MomentField1D, MomentField2D};
use crate::mesh::{Mesh1D, Mesh2D, MeshError};
use crate::physics::{ConservationLaw, Euler1D, Euler2D, ScalarLaw};
use crate::quadrature::gauss5;
use crate::rhs::{CellFix2D, Scheme1D, Scheme2D, SchemeError, SchemeMode};
use crate::scalar::{lit, to_f64, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemName {
    Burgers1D,
    Euler1DWave,
    Burgers2D,
    Euler2DWave,
    Vortex,
    Buckley,
    Lax,
    ShuOsher,
    Blast,
    Dmr,
    Step,
}

impl ProblemName {
    pub const ALL: [ProblemName; 11] = [
        ProblemName::Burgers1D,
        ProblemName::Euler1DWave,
        ProblemName::Burgers2D,
        ProblemName::Euler2DWave,
        ProblemName::Vortex,
        ProblemName::Buckley,
        ProblemName::Lax,
        ProblemName::ShuOsher,
        ProblemName::Blast,
        ProblemName::Dmr,
        ProblemName::Step,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemName::Burgers1D => "burgers1d",
            ProblemName::Euler1DWave => "euler1d-wave",
            ProblemName::Burgers2D => "burgers2d",
            ProblemName::Euler2DWave => "euler2d-wave",
            ProblemName::Vortex => "vortex",
            ProblemName::Buckley => "buckley",
            ProblemName::Lax => "lax",
            ProblemName::ShuOsher => "shu-osher",
            ProblemName::Blast => "blast",
            ProblemName::Dmr => "dmr",
            ProblemName::Step => "step",
        }
    }

    pub fn is_2d(self) -> bool {
        matches!(
            self,
            ProblemName::Burgers2D | ProblemName::Euler2DWave | ProblemName::Vortex | ProblemName::Dmr | ProblemName::Step
        )
    }

    pub fn has_exact(self) -> bool {
        matches!(
            self,
            ProblemName::Burgers1D
                | ProblemName::Euler1DWave
                | ProblemName::Burgers2D
                | ProblemName::Euler2DWave
                | ProblemName::Vortex
        )
    }
}

impl fmt::Display for ProblemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemName {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemName::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ProblemError::Unknown(s.to_string()))
    }
}

fn catalog() -> String {
    ProblemName::ALL.map(|p| p.name()).join(", ")
}

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("unknown problem '{name}' (expected one of: {list})", name = .0, list = catalog())]
    Unknown(String),
    #[error("problem '{0}' has no exact solution")]
    NoOracle(ProblemName),
    #[error("exact solution not available at t = {t}: the solution has steepened into a shock")]
    PastBreaking { t: f64 },
    #[error("exact solution iteration did not converge at x = {x}, t = {t}")]
    NotConverged { x: f64, t: f64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

pub type Init1D<T, const N: usize> = Arc<dyn Fn(T) -> [T; N] + Send + Sync>;
pub type Init2D<T, const N: usize> = Arc<dyn Fn(T, T) -> [T; N] + Send + Sync>;
/// `(x, t) ↦ u`
pub type Exact1D<T, const N: usize> = Arc<dyn Fn(T, T) -> Result<[T; N], ProblemError> + Send + Sync>;
/// `(x, y, t) ↦ u`
pub type Exact2D<T, const N: usize> = Arc<dyn Fn(T, T, T) -> Result<[T; N], ProblemError> + Send + Sync>;

#[derive(Clone)]
pub struct Preset1D<T, P, const N: usize> {
    pub name: ProblemName,
    pub physics: P,
    pub x_lo: T,
    pub x_hi: T,
    pub n: usize,
    pub t_end: T,
    pub cfl: T,
    pub bc: Boundary1D<T, N>,
    pub init: Init1D<T, N>,
    pub exact: Option<Exact1D<T, N>>,
    /// Component compared against the exact solution.
    pub error_component: usize,
}

#[derive(Clone)]
pub struct Preset2D<T, P, const N: usize> {
    pub name: ProblemName,
    pub physics: P,
    pub x_lo: T,
    pub x_hi: T,
    pub y_lo: T,
    pub y_hi: T,
    pub nx: usize,
    pub ny: usize,
    pub t_end: T,
    pub cfl: T,
    pub bc: Boundary2D<T, N>,
    pub init: Init2D<T, N>,
    pub exact: Option<Exact2D<T, N>>,
    pub error_component: usize,
    /// Lower-right obstacle `[x_from, x_hi] × [y_lo, y_to]`.
    pub solid: Option<(T, T)>,
    pub fix: Option<CellFix2D<T, N>>,
}

/// Any catalog entry, by law and dimension.
#[derive(Clone)]
pub enum Preset<T: Real> {
    Scalar1D(Preset1D<T, ScalarLaw, 1>),
    Euler1D(Preset1D<T, Euler1D<T>, 3>),
    Scalar2D(Preset2D<T, ScalarLaw, 1>),
    Euler2D(Preset2D<T, Euler2D<T>, 4>),
}

impl<T: Real> Preset<T> {
    pub fn name(&self) -> ProblemName {
        match self {
            Preset::Scalar1D(p) => p.name,
            Preset::Euler1D(p) => p.name,
            Preset::Scalar2D(p) => p.name,
            Preset::Euler2D(p) => p.name,
        }
    }

    pub fn t_end(&self) -> T {
        match self {
            Preset::Scalar1D(p) => p.t_end,
            Preset::Euler1D(p) => p.t_end,
            Preset::Scalar2D(p) => p.t_end,
            Preset::Euler2D(p) => p.t_end,
        }
    }
}

impl<T: Real, P: ConservationLaw<T, N> + Clone, const N: usize> Preset1D<T, P, N> {
    pub fn mesh(&self, n: usize) -> Result<Mesh1D<T>, ProblemError> {
        Ok(Mesh1D::new(self.x_lo, self.x_hi, n)?)
    }

    pub fn initial_field(&self, mesh: &Mesh1D<T>) -> Result<MomentField1D<T, N>, ProblemError> {
        let init = &self.init;
        Ok(MomentField1D::init(mesh, |x| init(x))?)
    }

    pub fn scheme(&self, mesh: Mesh1D<T>, mode: SchemeMode) -> Result<Scheme1D<T, P, N>, ProblemError> {
        Ok(Scheme1D::new(mesh, self.physics.clone(), self.bc.clone(), mode)?)
    }

    /// `(L1, L∞)` of the cell-average error in [`error_component`](Self::error_component)
    /// at time `t`; L1 is the mean absolute error over interior cells.
    pub fn error_norms(&self, field: &MomentField1D<T, N>, mesh: &Mesh1D<T>, t: T) -> Result<(T, T), ProblemError> {
        let exact = self.exact.as_ref().ok_or(ProblemError::NoOracle(self.name))?;
        let k = self.error_component;
        let (nodes, weights) = gauss5::<T>();
        let mut errors = Vec::with_capacity(mesh.n);
        for i in 0..mesh.n {
            let xc = mesh.center(i);
            let mut avg = T::zero();
            for (xi, w) in nodes.iter().zip(weights.iter()) {
                avg += *w * exact(xc + *xi * mesh.dx, t)?[k];
            }
            errors.push(field.avg[mesh.padded(i)][k] - avg);
        }
        Ok(norms(&errors))
    }
}

impl<T: Real, P: ConservationLaw<T, N> + Clone, const N: usize> Preset2D<T, P, N> {
    pub fn mesh(&self, nx: usize, ny: usize) -> Result<Mesh2D<T>, ProblemError> {
        let m = Mesh2D::new(self.x_lo, self.x_hi, self.y_lo, self.y_hi, nx, ny)?;
        Ok(match self.solid {
            Some((x, y)) => m.with_solid_block(x, y)?,
            None => m,
        })
    }

    pub fn initial_field(&self, mesh: &Mesh2D<T>) -> Result<MomentField2D<T, N>, ProblemError> {
        let init = &self.init;
        Ok(MomentField2D::init(mesh, |x, y| init(x, y))?)
    }

    pub fn scheme(&self, mesh: Mesh2D<T>, mode: SchemeMode) -> Result<Scheme2D<T, P, N>, ProblemError> {
        let s = Scheme2D::new(mesh, self.physics.clone(), self.bc.clone(), mode)?;
        Ok(match &self.fix {
            Some(f) => s.with_fix(f.clone()),
            None => s,
        })
    }

    /// As [`Preset1D::error_norms`], with tensor Gauss averages.
    pub fn error_norms(&self, field: &MomentField2D<T, N>, mesh: &Mesh2D<T>, t: T) -> Result<(T, T), ProblemError> {
        let exact = self.exact.as_ref().ok_or(ProblemError::NoOracle(self.name))?;
        let k = self.error_component;
        let (nodes, weights) = gauss5::<T>();
        let mut errors = Vec::with_capacity(mesh.nx * mesh.ny);
        for j in 0..mesh.ny as isize {
            for i in 0..mesh.nx as isize {
                if mesh.is_solid(i, j) {
                    continue;
                }
                let (xc, yc) = mesh.center(i, j);
                let mut avg = T::zero();
                for (eta, wy) in nodes.iter().zip(weights.iter()) {
                    for (xi, wx) in nodes.iter().zip(weights.iter()) {
                        avg += *wx * *wy * exact(xc + *xi * mesh.dx, yc + *eta * mesh.dy, t)?[k];
                    }
                }
                errors.push(field.avg[mesh.idx(i, j)][k] - avg);
            }
        }
        Ok(norms(&errors))
    }
}

/// Mean and maximum absolute value.
pub fn norms<T: Real>(errors: &[T]) -> (T, T) {
    if errors.is_empty() {
        return (T::zero(), T::zero());
    }
    let mut sum = crate::scalar::CompensatedSum::new();
    let mut max = T::zero();
    for e in errors {
        sum.add(e.abs());
        max = max.max(e.abs());
    }
    (sum.value() / lit(errors.len() as f64), max)
}

/// Solves `u = 0.5 + sin(a − b·u)` for `0 ≤ b < 1`, where the right side is
/// a contraction and the root is bracketed by `[−0.5, 1.5]`.
pub fn burgers_implicit(a: f64, b: f64) -> Option<f64> {
    if !(0.0..1.0).contains(&b) {
        return None;
    }
    let g = |u: f64| u - 0.5 - (a - b * u).sin();
    let dg = |u: f64| 1.0 + b * (a - b * u).cos();
    let (mut lo, mut hi) = (-0.5, 1.5);
    let mut u = 0.5 + a.sin();
    for _ in 0..200 {
        let r = g(u);
        if r.abs() <= 1e-15 {
            return Some(u);
        }
        if r < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let next = u - r / dg(u);
        u = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo <= 1e-16 {
            return Some(u);
        }
    }
    (g(u).abs() <= 1e-14).then_some(u)
}

/// `u_t + (u²/2)_x = 0`, `u(x, 0) = 0.5 + sin(πx)`.
pub fn burgers_1d_exact(x: f64, t: f64) -> Result<f64, ProblemError> {
    if PI * t >= 1.0 {
        return Err(ProblemError::PastBreaking { t });
    }
    burgers_implicit(PI * x, PI * t).ok_or(ProblemError::NotConverged { x, t })
}

/// `u_t + (u²/2)_x + (u²/2)_y = 0`, `u(x, y, 0) = 0.5 + sin(π(x + y)/2)`.
pub fn burgers_2d_exact(x: f64, y: f64, t: f64) -> Result<f64, ProblemError> {
    if PI * t >= 1.0 {
        return Err(ProblemError::PastBreaking { t });
    }
    burgers_implicit(PI * (x + y) / 2.0, PI * t).ok_or(ProblemError::NotConverged { x, t })
}

/// Post-shock `(ρ, u_n, p)` behind a normal shock of Mach number `mach`
/// moving into still gas `(ρ, p)`.
pub fn normal_shock(gamma: f64, mach: f64, rho: f64, p: f64) -> (f64, f64, f64) {
    let m2 = mach * mach;
    let rho2 = rho * (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0);
    let p2 = p * (2.0 * gamma * m2 - (gamma - 1.0)) / (gamma + 1.0);
    let speed = mach * (gamma * p / rho).sqrt();
    (rho2, speed * (1.0 - rho / rho2), p2)
}

/// Horizontal position of the double-Mach incident shock on the line `y = 1`.
pub fn dmr_shock_x(t: f64) -> f64 {
    1.0 / 6.0 + (1.0 + 20.0 * t) / 3f64.sqrt()
}

/// Corner treatment for the forward step. The 2×2 block of cells above and
/// right of the corner takes the entropy and total enthalpy of the cell
/// diagonally below-left of the corner, keeping its own pressure and flow
/// direction; its moments are cleared.
pub fn step_corner_fix<T: Real>(field: &mut MomentField2D<T, 4>, mesh: &Mesh2D<T>, physics: &Euler2D<T>) {
    let Some(block) = mesh.solid else { return };
    let (is, je) = (block.i_start as isize, block.j_end as isize);
    if is == 0 || je as usize >= mesh.ny || block.i_start + 1 >= mesh.nx {
        return;
    }
    let g = physics.gamma;
    let reference = field.avg[mesh.idx(is - 1, je - 1)];
    let p_ref = physics.pressure(&reference);
    if !(reference[0] > T::zero() && p_ref > T::zero()) {
        return;
    }
    let entropy = p_ref / reference[0].powf(g);
    let enthalpy = (reference[3] + p_ref) / reference[0];
    let cp = g / (g - T::one());
    for j in je..je + 2 {
        for i in is..is + 2 {
            let idx = mesh.idx(i, j);
            let u = field.avg[idx];
            let p = physics.pressure(&u);
            if !(u[0] > T::zero() && p > T::zero()) {
                continue;
            }
            let rho = (p / entropy).powf(T::one() / g);
            let (vx, vy) = (u[1] / u[0], u[2] / u[0]);
            let speed = (vx * vx + vy * vy).sqrt();
            let target = (lit::<T>(2.0) * (enthalpy - cp * p / rho)).max(T::zero()).sqrt();
            let scale = if speed > T::zero() { target / speed } else { T::zero() };
            let (nx, ny) = (vx * scale, vy * scale);
            let e = p / (g - T::one()) + lit::<T>(0.5) * rho * (nx * nx + ny * ny);
            field.avg[idx] = [rho, rho * nx, rho * ny, e];
            field.mom_x[idx] = [T::zero(); 4];
            field.mom_y[idx] = [T::zero(); 4];
        }
    }
}

fn euler1<T: Real>(g: T, rho: f64, u: f64, p: f64) -> [T; 3] {
    let gamma = to_f64(g);
    [lit(rho), lit(rho * u), lit(p / (gamma - 1.0) + 0.5 * rho * u * u)]
}

fn euler2<T: Real>(g: T, rho: f64, u: f64, v: f64, p: f64) -> [T; 4] {
    let gamma = to_f64(g);
    [lit(rho), lit(rho * u), lit(rho * v), lit(p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v))]
}

/// Isentropic vortex of strength `eps` centred at the origin on the mean
/// flow `(1, 1, 1, 1)`, as primitive `(ρ, u, v, p)`.
pub fn vortex_primitive(gamma: f64, eps: f64, x: f64, y: f64) -> (f64, f64, f64, f64) {
    let r2 = x * x + y * y;
    let rho = (1.0 - (gamma - 1.0) * eps * eps / (8.0 * gamma * PI * PI) * (1.0 - r2).exp()).powf(1.0 / (gamma - 1.0));
    let bump = eps / (2.0 * PI) * (0.5 * (1.0 - r2)).exp();
    (rho, 1.0 - bump * y, 1.0 + bump * x, rho.powf(gamma))
}

fn wrap(v: f64, lo: f64, hi: f64) -> f64 {
    let len = hi - lo;
    lo + (v - lo).rem_euclid(len)
}

fn periodic1<T: Real, const N: usize>() -> Boundary1D<T, N> {
    Boundary1D::uniform(BoundaryKind::Periodic)
}

fn periodic2<T: Real, const N: usize>() -> Boundary2D<T, N> {
    Boundary2D::uniform(BoundaryKind::Periodic)
}

/// Catalog lookup by CLI name.
pub fn preset<T: Real>(name: &str) -> Result<Preset<T>, ProblemError> {
    Ok(build(name.parse()?))
}

pub fn build<T: Real>(name: ProblemName) -> Preset<T> {
    let e1 = Euler1D::<T>::default();
    let e2 = Euler2D::<T>::default();
    let g1 = e1.gamma;
    let g2 = e2.gamma;
    match name {
        ProblemName::Burgers1D => Preset::Scalar1D(Preset1D {
            name,
            physics: ScalarLaw::Burgers,
            x_lo: T::zero(),
            x_hi: lit(2.0),
            n: 80,
            t_end: lit(0.5 / PI),
            cfl: lit(0.6),
            bc: periodic1(),
            init: Arc::new(|x: T| [lit(0.5 + (PI * to_f64(x)).sin())]),
            exact: Some(Arc::new(|x: T, t: T| Ok([lit(burgers_1d_exact(to_f64(x), to_f64(t))?)]))),
            error_component: 0,
        }),
        ProblemName::Euler1DWave => Preset::Euler1D(Preset1D {
            name,
            physics: e1,
            x_lo: T::zero(),
            x_hi: lit(2.0),
            n: 80,
            t_end: lit(2.0),
            cfl: lit(0.6),
            bc: periodic1(),
            init: Arc::new(move |x: T| euler1(g1, 1.0 + 0.2 * (PI * to_f64(x)).sin(), 1.0, 1.0)),
            exact: Some(Arc::new(move |x: T, t: T| {
                Ok(euler1(g1, 1.0 + 0.2 * (PI * (to_f64(x) - to_f64(t))).sin(), 1.0, 1.0))
            })),
            error_component: 0,
        }),
        ProblemName::Buckley => Preset::Scalar1D(Preset1D {
            name,
            physics: ScalarLaw::BuckleyLeverett,
            x_lo: lit(-1.0),
            x_hi: T::one(),
            n: 80,
            t_end: lit(0.4),
            cfl: lit(0.6),
            bc: Boundary1D { left: BoundaryKind::Dirichlet([T::zero()]), right: BoundaryKind::Outflow },
            init: Arc::new(|x: T| {
                let x = to_f64(x);
                [if (-0.5..=0.0).contains(&x) { T::one() } else { T::zero() }]
            }),
            exact: None,
            error_component: 0,
        }),
        ProblemName::Lax => Preset::Euler1D(Preset1D {
            name,
            physics: e1,
            x_lo: lit(-0.5),
            x_hi: lit(0.5),
            n: 200,
            t_end: lit(0.16),
            cfl: lit(0.6),
            bc: Boundary1D::uniform(BoundaryKind::Outflow),
            init: Arc::new(move |x: T| {
                if to_f64(x) < 0.0 {
                    euler1(g1, 0.445, 0.698, 3.528)
                } else {
                    euler1(g1, 0.5, 0.0, 0.571)
                }
            }),
            exact: None,
            error_component: 0,
        }),
        ProblemName::ShuOsher => {
            let left = euler1(g1, 3.857143, 2.629369, 10.333333);
            Preset::Euler1D(Preset1D {
                name,
                physics: e1,
                x_lo: lit(-5.0),
                x_hi: lit(5.0),
                n: 400,
                t_end: lit(1.8),
                cfl: lit(0.6),
                bc: Boundary1D { left: BoundaryKind::Dirichlet(left), right: BoundaryKind::Outflow },
                init: Arc::new(move |x: T| {
                    let x = to_f64(x);
                    if x < -4.0 {
                        left
                    } else {
                        euler1(g1, 1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
                    }
                }),
                exact: None,
                error_component: 0,
            })
        }
        ProblemName::Blast => Preset::Euler1D(Preset1D {
            name,
            physics: e1,
            x_lo: T::zero(),
            x_hi: T::one(),
            n: 800,
            t_end: lit(0.038),
            cfl: lit(0.6),
            bc: Boundary1D::uniform(BoundaryKind::Reflective),
            init: Arc::new(move |x: T| {
                let x = to_f64(x);
                let p = if x < 0.1 {
                    1e3
                } else if x < 0.9 {
                    1e-2
                } else {
                    1e2
                };
                euler1(g1, 1.0, 0.0, p)
            }),
            exact: None,
            error_component: 0,
        }),
        ProblemName::Burgers2D => Preset::Scalar2D(Preset2D {
            name,
            physics: ScalarLaw::Burgers,
            x_lo: T::zero(),
            x_hi: lit(4.0),
            y_lo: T::zero(),
            y_hi: lit(4.0),
            nx: 80,
            ny: 80,
            t_end: lit(0.5 / PI),
            cfl: lit(0.45),
            bc: periodic2(),
            init: Arc::new(|x: T, y: T| [lit(0.5 + (PI * (to_f64(x) + to_f64(y)) / 2.0).sin())]),
            exact: Some(Arc::new(|x: T, y: T, t: T| {
                Ok([lit(burgers_2d_exact(to_f64(x), to_f64(y), to_f64(t))?)])
            })),
            error_component: 0,
            solid: None,
            fix: None,
        }),
        ProblemName::Euler2DWave => Preset::Euler2D(Preset2D {
            name,
            physics: e2,
            x_lo: T::zero(),
            x_hi: lit(2.0),
            y_lo: T::zero(),
            y_hi: lit(2.0),
            nx: 80,
            ny: 80,
            t_end: lit(2.0),
            cfl: lit(0.45),
            bc: periodic2(),
            init: Arc::new(move |x: T, y: T| {
                euler2(g2, 1.0 + 0.2 * (PI * (to_f64(x) + to_f64(y))).sin(), 1.0, 1.0, 1.0)
            }),
            exact: Some(Arc::new(move |x: T, y: T, t: T| {
                let s = to_f64(x) + to_f64(y) - 2.0 * to_f64(t);
                Ok(euler2(g2, 1.0 + 0.2 * (PI * s).sin(), 1.0, 1.0, 1.0))
            })),
            error_component: 0,
            solid: None,
            fix: None,
        }),
        ProblemName::Vortex => {
            let gamma = to_f64(g2);
            let state = move |x: f64, y: f64| {
                let (r, u, v, p) = vortex_primitive(gamma, 5.0, x, y);
                euler2(g2, r, u, v, p)
            };
            Preset::Euler2D(Preset2D {
                name,
                physics: e2,
                x_lo: lit(-5.0),
                x_hi: lit(5.0),
                y_lo: lit(-5.0),
                y_hi: lit(5.0),
                nx: 80,
                ny: 80,
                t_end: lit(10.0),
                cfl: lit(0.45),
                bc: periodic2(),
                init: Arc::new(move |x: T, y: T| state(to_f64(x), to_f64(y))),
                exact: Some(Arc::new(move |x: T, y: T, t: T| {
                    let t = to_f64(t);
                    Ok(state(wrap(to_f64(x) - t, -5.0, 5.0), wrap(to_f64(y) - t, -5.0, 5.0)))
                })),
                error_component: 0,
                solid: None,
                fix: None,
            })
        }
        ProblemName::Dmr => {
            let gamma = to_f64(g2);
            let (rho2, un, p2) = normal_shock(gamma, 10.0, 1.4, 1.0);
            let (c, s) = ((PI / 6.0).cos(), (PI / 6.0).sin());
            let post = euler2(g2, rho2, un * c, -un * s, p2);
            let pre = euler2(g2, 1.4, 0.0, 0.0, 1.0);
            let x0 = 1.0 / 6.0;
            let bottom: crate::field::GhostFn<T, 4> = Arc::new(move |_t: T, x: T, _y: T| {
                if to_f64(x) < x0 {
                    GhostRule::State(post)
                } else {
                    GhostRule::Reflect
                }
            });
            let top: crate::field::GhostFn<T, 4> = Arc::new(move |t: T, x: T, _y: T| {
                GhostRule::State(if to_f64(x) < dmr_shock_x(to_f64(t)) { post } else { pre })
            });
            Preset::Euler2D(Preset2D {
                name,
                physics: e2,
                x_lo: T::zero(),
                x_hi: lit(4.0),
                y_lo: T::zero(),
                y_hi: T::one(),
                nx: 480,
                ny: 120,
                t_end: lit(0.2),
                cfl: lit(0.45),
                bc: Boundary2D {
                    left: BoundaryKind::Dirichlet(post),
                    right: BoundaryKind::Outflow,
                    bottom: BoundaryKind::Custom(bottom),
                    top: BoundaryKind::Custom(top),
                },
                init: Arc::new(move |x: T, y: T| {
                    if to_f64(x) < x0 + to_f64(y) / 3f64.sqrt() {
                        post
                    } else {
                        pre
                    }
                }),
                exact: None,
                error_component: 0,
                solid: None,
                fix: None,
            })
        }
        ProblemName::Step => {
            let inflow = euler2(g2, 1.4, 3.0, 0.0, 1.0);
            let physics = e2;
            Preset::Euler2D(Preset2D {
                name,
                physics: e2,
                x_lo: T::zero(),
                x_hi: lit(3.0),
                y_lo: T::zero(),
                y_hi: T::one(),
                nx: 480,
                ny: 160,
                t_end: lit(4.0),
                cfl: lit(0.45),
                bc: Boundary2D {
                    left: BoundaryKind::Dirichlet(inflow),
                    right: BoundaryKind::Outflow,
                    bottom: BoundaryKind::Reflective,
                    top: BoundaryKind::Reflective,
                },
                init: Arc::new(move |_x: T, _y: T| inflow),
                exact: None,
                error_component: 0,
                solid: Some((lit(0.6), lit(0.2))),
                fix: Some(Arc::new(move |f: &mut MomentField2D<T, 4>, m: &Mesh2D<T>| step_corner_fix(f, m, &physics))),
            })
        }
    }
}
