//! Moment degrees of freedom: cell averages plus first moments, with ghosts.
//!
//! Storage is cell-major: each padded cell holds an `[T; N]` per moment, so
//! a cell's whole state sits in one cache line for the stencil kernels.

use std::sync::Arc;

use thiserror::Error;

use crate::mesh::{Mesh1D, Mesh2D, N_GHOST};
use crate::physics::{Axis, ConservationLaw};
use crate::quadrature::gauss5;
use crate::scalar::{zeros, CompensatedSum, Real};

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("initial condition is not finite in cell ({i}, {j})")]
    NonFiniteInitial { i: usize, j: usize },
    #[error("periodic boundary on the {axis:?} axis is not paired with a periodic opposite side")]
    UnpairedPeriodic { axis: Axis },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentField1D<T, const N: usize> {
    pub avg: Vec<[T; N]>,
    pub mom_x: Vec<[T; N]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentField2D<T, const N: usize> {
    pub avg: Vec<[T; N]>,
    pub mom_x: Vec<[T; N]>,
    pub mom_y: Vec<[T; N]>,
}

/// How a custom boundary treats one ghost cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GhostRule<T, const N: usize> {
    /// Fixed state, zero moments.
    State([T; N]),
    Reflect,
    Outflow,
}

/// Callback `(t, x, y)` evaluated at a ghost-cell centre.
pub type GhostFn<T, const N: usize> = Arc<dyn Fn(T, T, T) -> GhostRule<T, N> + Send + Sync>;

#[derive(Clone)]
pub enum BoundaryKind<T, const N: usize> {
    Periodic,
    Outflow,
    Dirichlet([T; N]),
    Reflective,
    Custom(GhostFn<T, N>),
}

impl<T: Real, const N: usize> BoundaryKind<T, N> {
    pub fn is_periodic(&self) -> bool {
        matches!(self, BoundaryKind::Periodic)
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, BoundaryKind::Custom(_))
    }
}

impl<T: std::fmt::Debug, const N: usize> std::fmt::Debug for BoundaryKind<T, N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryKind::Periodic => write!(f, "Periodic"),
            BoundaryKind::Outflow => write!(f, "Outflow"),
            BoundaryKind::Dirichlet(s) => write!(f, "Dirichlet({s:?})"),
            BoundaryKind::Reflective => write!(f, "Reflective"),
            BoundaryKind::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Boundary1D<T, const N: usize> {
    pub left: BoundaryKind<T, N>,
    pub right: BoundaryKind<T, N>,
}

#[derive(Clone, Debug)]
pub struct Boundary2D<T, const N: usize> {
    pub left: BoundaryKind<T, N>,
    pub right: BoundaryKind<T, N>,
    pub bottom: BoundaryKind<T, N>,
    pub top: BoundaryKind<T, N>,
}

fn check_pair<T: Real, const N: usize>(
    a: &BoundaryKind<T, N>,
    b: &BoundaryKind<T, N>,
    axis: Axis,
) -> Result<(), FieldError> {
    if a.is_periodic() != b.is_periodic() {
        Err(FieldError::UnpairedPeriodic { axis })
    } else {
        Ok(())
    }
}

impl<T: Real, const N: usize> Boundary1D<T, N> {
    pub fn uniform(kind: BoundaryKind<T, N>) -> Self {
        Self { left: kind.clone(), right: kind }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        check_pair(&self.left, &self.right, Axis::X)
    }

    pub fn is_time_dependent(&self) -> bool {
        self.left.is_time_dependent() || self.right.is_time_dependent()
    }
}

impl<T: Real, const N: usize> Boundary2D<T, N> {
    pub fn uniform(kind: BoundaryKind<T, N>) -> Self {
        Self { left: kind.clone(), right: kind.clone(), bottom: kind.clone(), top: kind }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        check_pair(&self.left, &self.right, Axis::X)?;
        check_pair(&self.bottom, &self.top, Axis::Y)
    }

    pub fn is_time_dependent(&self) -> bool {
        [&self.left, &self.right, &self.bottom, &self.top].iter().any(|k| k.is_time_dependent())
    }
}

/// Ghost state reflected across a wall normal to `axis`: the average keeps
/// its value except the normal momentum, and so on for the moments. See the
/// `reflect_*` helpers.
#[inline]
fn negate_component<T: Real, const N: usize>(u: &[T; N], k: Option<usize>) -> [T; N] {
    let mut out = *u;
    if let Some(k) = k {
        out[k] = -out[k];
    }
    out
}

#[inline]
fn negate_except<T: Real, const N: usize>(u: &[T; N], k: Option<usize>) -> [T; N] {
    let mut out = u.map(|v| -v);
    if let Some(k) = k {
        out[k] = u[k];
    }
    out
}

/// Cell average of `u` mirrored across a wall normal to the momentum slot `normal`.
#[inline]
pub fn reflect_avg<T: Real, const N: usize>(u: &[T; N], normal: Option<usize>) -> [T; N] {
    negate_component(u, normal)
}

/// Moment along the wall normal: the mirror flips its sign, and the normal
/// momentum flips once more.
#[inline]
pub fn reflect_normal_moment<T: Real, const N: usize>(m: &[T; N], normal: Option<usize>) -> [T; N] {
    negate_except(m, normal)
}

/// Moment along the wall: only the normal momentum flips.
#[inline]
pub fn reflect_tangential_moment<T: Real, const N: usize>(m: &[T; N], normal: Option<usize>) -> [T; N] {
    negate_component(m, normal)
}

impl<T: Real, const N: usize> MomentField1D<T, N> {
    pub fn zeros(mesh: &Mesh1D<T>) -> Self {
        let n = mesh.n_padded();
        Self { avg: vec![zeros(); n], mom_x: vec![zeros(); n] }
    }

    /// Cell averages and first moments of `u0` by five-point Gauss quadrature.
    pub fn init<F>(mesh: &Mesh1D<T>, u0: F) -> Result<Self, FieldError>
    where
        F: Fn(T) -> [T; N],
    {
        let (nodes, weights) = gauss5::<T>();
        let mut f = Self::zeros(mesh);
        for i in 0..mesh.n {
            let xc = mesh.center(i);
            let mut a = [T::zero(); N];
            let mut m = [T::zero(); N];
            for (xi, w) in nodes.iter().zip(weights.iter()) {
                let u = u0(xc + *xi * mesh.dx);
                for k in 0..N {
                    a[k] += *w * u[k];
                    m[k] += *w * *xi * u[k];
                }
            }
            if !a.iter().chain(m.iter()).all(|v| v.is_finite()) {
                return Err(FieldError::NonFiniteInitial { i, j: 0 });
            }
            let p = mesh.padded(i);
            f.avg[p] = a;
            f.mom_x[p] = m;
        }
        Ok(f)
    }

    /// Totals `Σ ū Δx` over interior cells.
    pub fn conserved_totals(&self, mesh: &Mesh1D<T>) -> [T; N] {
        let mut sums = [CompensatedSum::new(); N];
        for i in 0..mesh.n {
            let u = &self.avg[mesh.padded(i)];
            for k in 0..N {
                sums[k].add(u[k]);
            }
        }
        sums.map(|s| s.value() * mesh.dx)
    }

    pub fn interior_avg<'a>(&'a self, mesh: &Mesh1D<T>) -> &'a [[T; N]] {
        &self.avg[N_GHOST..N_GHOST + mesh.n]
    }

    /// `self ← a·base + b·(self + dt·rhs)`, the shared shape of every TVD RK3 stage.
    pub fn rk_combine(&mut self, a: T, base: &Self, b: T, dt: T, rhs: &Self) {
        combine(&mut self.avg, a, &base.avg, b, dt, &rhs.avg);
        combine(&mut self.mom_x, a, &base.mom_x, b, dt, &rhs.mom_x);
    }

    pub fn all_finite(&self) -> bool {
        self.avg.iter().chain(self.mom_x.iter()).all(crate::scalar::all_finite)
    }

    /// Fills both ghost layers.
    pub fn apply_boundary<P: ConservationLaw<T, N>>(&mut self, bc: &Boundary1D<T, N>, t: T, mesh: &Mesh1D<T>, physics: &P) {
        let n = mesh.n;
        let normal = physics.normal_momentum(Axis::X);
        for g in 1..=N_GHOST {
            let ghost_l = N_GHOST - g;
            let ghost_r = N_GHOST + n - 1 + g;
            let x_l = mesh.center_of_padded(ghost_l);
            let x_r = mesh.center_of_padded(ghost_r);
            self.fill_ghost(&bc.left, t, x_l, ghost_l, N_GHOST + n - g, N_GHOST, N_GHOST + g - 1, normal);
            self.fill_ghost(&bc.right, t, x_r, ghost_r, N_GHOST + g - 1, N_GHOST + n - 1, N_GHOST + n - g, normal);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_ghost(
        &mut self,
        kind: &BoundaryKind<T, N>,
        t: T,
        x: T,
        ghost: usize,
        wrap: usize,
        nearest: usize,
        mirror: usize,
        normal: Option<usize>,
    ) {
        let rule = match kind {
            BoundaryKind::Periodic => {
                self.avg[ghost] = self.avg[wrap];
                self.mom_x[ghost] = self.mom_x[wrap];
                return;
            }
            BoundaryKind::Outflow => GhostRule::Outflow,
            BoundaryKind::Dirichlet(s) => GhostRule::State(*s),
            BoundaryKind::Reflective => GhostRule::Reflect,
            BoundaryKind::Custom(f) => f(t, x, T::zero()),
        };
        match rule {
            GhostRule::Outflow => {
                self.avg[ghost] = self.avg[nearest];
                self.mom_x[ghost] = self.mom_x[nearest];
            }
            GhostRule::State(s) => {
                self.avg[ghost] = s;
                self.mom_x[ghost] = zeros();
            }
            GhostRule::Reflect => {
                self.avg[ghost] = reflect_avg(&self.avg[mirror], normal);
                self.mom_x[ghost] = reflect_normal_moment(&self.mom_x[mirror], normal);
            }
        }
    }
}

fn combine<T: Real, const N: usize>(dst: &mut [[T; N]], a: T, base: &[[T; N]], b: T, dt: T, rhs: &[[T; N]]) {
    for ((d, u), r) in dst.iter_mut().zip(base.iter()).zip(rhs.iter()) {
        for k in 0..N {
            d[k] = a * u[k] + b * (d[k] + dt * r[k]);
        }
    }
}

/// Source location for one ghost cell in 2D.
#[derive(Clone, Copy)]
enum Source {
    Copy(usize),
    Mirror(usize),
    State,
}

impl<T: Real, const N: usize> MomentField2D<T, N> {
    pub fn zeros(mesh: &Mesh2D<T>) -> Self {
        let n = mesh.n_padded();
        Self { avg: vec![zeros(); n], mom_x: vec![zeros(); n], mom_y: vec![zeros(); n] }
    }

    /// Cell averages and both first moments by tensor five-point Gauss quadrature.
    /// Solid cells are left at zero.
    pub fn init<F>(mesh: &Mesh2D<T>, u0: F) -> Result<Self, FieldError>
    where
        F: Fn(T, T) -> [T; N],
    {
        let (nodes, weights) = gauss5::<T>();
        let mut f = Self::zeros(mesh);
        for j in 0..mesh.ny {
            for i in 0..mesh.nx {
                if mesh.is_solid(i as isize, j as isize) {
                    continue;
                }
                let (xc, yc) = mesh.center(i as isize, j as isize);
                let mut a = [T::zero(); N];
                let mut mx = [T::zero(); N];
                let mut my = [T::zero(); N];
                for (eta, wy) in nodes.iter().zip(weights.iter()) {
                    for (xi, wx) in nodes.iter().zip(weights.iter()) {
                        let u = u0(xc + *xi * mesh.dx, yc + *eta * mesh.dy);
                        let w = *wx * *wy;
                        for k in 0..N {
                            a[k] += w * u[k];
                            mx[k] += w * *xi * u[k];
                            my[k] += w * *eta * u[k];
                        }
                    }
                }
                if !a.iter().chain(mx.iter()).chain(my.iter()).all(|v| v.is_finite()) {
                    return Err(FieldError::NonFiniteInitial { i, j });
                }
                let p = mesh.idx(i as isize, j as isize);
                f.avg[p] = a;
                f.mom_x[p] = mx;
                f.mom_y[p] = my;
            }
        }
        Ok(f)
    }

    /// Totals `Σ ū ΔxΔy` over interior fluid cells.
    pub fn conserved_totals(&self, mesh: &Mesh2D<T>) -> [T; N] {
        let mut sums = [CompensatedSum::new(); N];
        for j in 0..mesh.ny as isize {
            for i in 0..mesh.nx as isize {
                if mesh.is_solid(i, j) {
                    continue;
                }
                let u = &self.avg[mesh.idx(i, j)];
                for k in 0..N {
                    sums[k].add(u[k]);
                }
            }
        }
        sums.map(|s| s.value() * mesh.dx * mesh.dy)
    }

    pub fn rk_combine(&mut self, a: T, base: &Self, b: T, dt: T, rhs: &Self) {
        combine(&mut self.avg, a, &base.avg, b, dt, &rhs.avg);
        combine(&mut self.mom_x, a, &base.mom_x, b, dt, &rhs.mom_x);
        combine(&mut self.mom_y, a, &base.mom_y, b, dt, &rhs.mom_y);
    }

    pub fn all_finite(&self) -> bool {
        self.avg
            .iter()
            .chain(self.mom_x.iter())
            .chain(self.mom_y.iter())
            .all(crate::scalar::all_finite)
    }

    /// Fills the ghost frame: the solid block (if any) first, then x-sides
    /// along interior rows, then y-sides along every padded column so
    /// corners inherit x-ghost data.
    pub fn apply_boundary<P: ConservationLaw<T, N>>(&mut self, bc: &Boundary2D<T, N>, t: T, mesh: &Mesh2D<T>, physics: &P) {
        let (nx, ny) = (mesh.nx as isize, mesh.ny as isize);
        let nxm = physics.normal_momentum(Axis::X);
        let nym = physics.normal_momentum(Axis::Y);
        self.fill_solid(mesh, nxm, nym);
        for j in 0..ny {
            for g in 1..=N_GHOST as isize {
                let (xl, y) = mesh.center(-g, j);
                let (xr, _) = mesh.center(nx - 1 + g, j);
                let src_l = self.resolve(&bc.left, t, xl, y, mesh.idx(nx - g, j), mesh.idx(0, j), mesh.idx(g - 1, j));
                self.fill_ghost(mesh.idx(-g, j), src_l, Axis::X, nxm);
                let src_r = self.resolve(&bc.right, t, xr, y, mesh.idx(g - 1, j), mesh.idx(nx - 1, j), mesh.idx(nx - g, j));
                self.fill_ghost(mesh.idx(nx - 1 + g, j), src_r, Axis::X, nxm);
            }
        }
        for i in -(N_GHOST as isize)..nx + N_GHOST as isize {
            for g in 1..=N_GHOST as isize {
                let (x, yb) = mesh.center(i, -g);
                let (_, yt) = mesh.center(i, ny - 1 + g);
                let src_b = self.resolve(&bc.bottom, t, x, yb, mesh.idx(i, ny - g), mesh.idx(i, 0), mesh.idx(i, g - 1));
                self.fill_ghost(mesh.idx(i, -g), src_b, Axis::Y, nym);
                let src_t = self.resolve(&bc.top, t, x, yt, mesh.idx(i, g - 1), mesh.idx(i, ny - 1), mesh.idx(i, ny - g));
                self.fill_ghost(mesh.idx(i, ny - 1 + g), src_t, Axis::Y, nym);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn resolve(
        &mut self,
        kind: &BoundaryKind<T, N>,
        t: T,
        x: T,
        y: T,
        wrap: usize,
        nearest: usize,
        mirror: usize,
    ) -> (Source, [T; N]) {
        let rule = match kind {
            BoundaryKind::Periodic => return (Source::Copy(wrap), zeros()),
            BoundaryKind::Outflow => GhostRule::Outflow,
            BoundaryKind::Dirichlet(s) => GhostRule::State(*s),
            BoundaryKind::Reflective => GhostRule::Reflect,
            BoundaryKind::Custom(f) => f(t, x, y),
        };
        match rule {
            GhostRule::Outflow => (Source::Copy(nearest), zeros()),
            GhostRule::Reflect => (Source::Mirror(mirror), zeros()),
            GhostRule::State(s) => (Source::State, s),
        }
    }

    fn fill_ghost(&mut self, ghost: usize, src: (Source, [T; N]), axis: Axis, normal: Option<usize>) {
        match src.0 {
            Source::Copy(s) => {
                self.avg[ghost] = self.avg[s];
                self.mom_x[ghost] = self.mom_x[s];
                self.mom_y[ghost] = self.mom_y[s];
            }
            Source::State => {
                self.avg[ghost] = src.1;
                self.mom_x[ghost] = zeros();
                self.mom_y[ghost] = zeros();
            }
            Source::Mirror(s) => self.mirror_into(ghost, s, axis, normal),
        }
    }

    fn mirror_into(&mut self, ghost: usize, s: usize, axis: Axis, normal: Option<usize>) {
        self.avg[ghost] = reflect_avg(&self.avg[s], normal);
        match axis {
            Axis::X => {
                self.mom_x[ghost] = reflect_normal_moment(&self.mom_x[s], normal);
                self.mom_y[ghost] = reflect_tangential_moment(&self.mom_y[s], normal);
            }
            Axis::Y => {
                self.mom_x[ghost] = reflect_tangential_moment(&self.mom_x[s], normal);
                self.mom_y[ghost] = reflect_normal_moment(&self.mom_y[s], normal);
            }
        }
    }

    /// Solid cells near the obstacle surface receive mirror images of the
    /// adjacent fluid: the two rows under the top face mirror across it, the
    /// two columns behind the front face mirror across that.
    fn fill_solid(&mut self, mesh: &Mesh2D<T>, nxm: Option<usize>, nym: Option<usize>) {
        let Some(b) = mesh.solid else { return };
        let (is, je) = (b.i_start as isize, b.j_end as isize);
        for j in 0..je {
            for i in is..mesh.nx as isize {
                let top_band = j >= je - N_GHOST as isize;
                let front_band = i < is + N_GHOST as isize;
                if top_band {
                    let src = mesh.idx(i, 2 * je - 1 - j);
                    self.mirror_into(mesh.idx(i, j), src, Axis::Y, nym);
                } else if front_band {
                    let src = mesh.idx(2 * is - 1 - i, j);
                    self.mirror_into(mesh.idx(i, j), src, Axis::X, nxm);
                }
            }
        }
    }
}
