use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::{limits, nonlinear, Phase, PhaseTimings, SchemeError, SchemeMode};
use crate::field::{reflect_avg, Boundary2D, MomentField2D};
use crate::hweno1d::{limit_first_moment, Stencil1D, EPSILON};
use crate::hweno2d::{label_offset, Kernel2D, INTERIOR_TARGETS, N_TARGETS, STENCIL_LEN, X_FACE_TARGETS, Y_FACE_TARGETS};
use crate::indicator::{kxrcf_flag_2d, TroubledMask};
use crate::mesh::Mesh2D;
use crate::physics::{Axis, ConservationLaw};
use crate::scalar::{lit, Real};

/// Correction applied to the field after every Runge–Kutta stage.
pub type CellFix2D<T, const N: usize> = Arc<dyn Fn(&mut MomentField2D<T, N>, &Mesh2D<T>) + Send + Sync>;

/// The 2D scheme: grid, law, boundaries, mode, kernel tables and scratch.
pub struct Scheme2D<T, P, const N: usize> {
    pub mesh: Mesh2D<T>,
    pub physics: P,
    pub bc: Boundary2D<T, N>,
    pub mode: SchemeMode,
    pub fix: Option<CellFix2D<T, N>>,
    kernel: Kernel2D<T>,
    snap_x: Vec<[T; N]>,
    snap_y: Vec<[T; N]>,
    traces: Vec<[[T; N]; N_TARGETS]>,
    /// Two Gauss-point fluxes per x-face, `(nx + 1)` faces per row.
    fx: Vec<[[T; N]; 2]>,
    /// Two Gauss-point fluxes per y-face, `nx` faces per row, `ny + 1` rows.
    fy: Vec<[[T; N]; 2]>,
}

type Gathered<T, const N: usize> = [[T; N]; STENCIL_LEN];

#[inline]
fn component<T: Real, const N: usize>(d: &Gathered<T, N>, k: usize) -> [T; STENCIL_LEN] {
    std::array::from_fn(|s| d[s][k])
}

#[inline]
fn row_stencil<T: Real, const N: usize>(a: &[[T; N]; 3], m: &[[T; N]; 3], k: usize) -> Stencil1D<T> {
    Stencil1D::new([a[0][k], a[1][k], a[2][k]], [m[0][k], m[1][k], m[2][k]])
}

impl<T: Real, P: ConservationLaw<T, N>, const N: usize> Scheme2D<T, P, N> {
    pub fn new(mesh: Mesh2D<T>, physics: P, bc: Boundary2D<T, N>, mode: SchemeMode) -> Result<Self, SchemeError> {
        bc.validate()?;
        let kernel = Kernel2D::with_epsilon(lit(EPSILON))?;
        let n = mesh.n_padded();
        Ok(Self {
            snap_x: vec![[T::zero(); N]; n],
            snap_y: vec![[T::zero(); N]; n],
            traces: vec![[[T::zero(); N]; N_TARGETS]; n],
            fx: vec![[[T::zero(); N]; 2]; (mesh.nx + 1) * mesh.ny],
            fy: vec![[[T::zero(); N]; 2]; mesh.nx * (mesh.ny + 1)],
            kernel,
            mesh,
            physics,
            bc,
            mode,
            fix: None,
        })
    }

    pub fn with_fix(mut self, fix: CellFix2D<T, N>) -> Self {
        self.fix = Some(fix);
        self
    }

    pub fn kernel(&self) -> &Kernel2D<T> {
        &self.kernel
    }

    pub fn periodic(&self) -> (bool, bool) {
        (self.bc.left.is_periodic(), self.bc.bottom.is_periodic())
    }

    pub fn apply_boundary(&self, field: &mut MomentField2D<T, N>, t: T) {
        field.apply_boundary(&self.bc, t, &self.mesh, &self.physics);
    }

    pub fn detect(&self, field: &MomentField2D<T, N>) -> TroubledMask {
        let len = self.mesh.n_padded();
        let cells = self.mesh.fluid_cells();
        match self.mode {
            SchemeMode::Hybrid => kxrcf_flag_2d(field, &self.physics, &self.mesh, self.periodic()),
            SchemeMode::LimitAll => {
                let mut m = TroubledMask::uniform(len, cells, true);
                for (p, f) in m.flags.iter_mut().enumerate() {
                    let (i, j) = self.mesh.ij(p);
                    *f = !self.mesh.is_blocked(i, j);
                }
                m
            }
            SchemeMode::LinearUnlimited => TroubledMask::uniform(len, cells, false),
        }
    }

    /// Wave-speed bounds `(α, β)` over interior fluid cell averages.
    pub fn wave_speeds(&self, field: &MomentField2D<T, N>) -> Result<(T, T), SchemeError> {
        let (mut a, mut b) = (T::zero(), T::zero());
        let mut lo = [T::infinity(); N];
        let mut hi = [T::neg_infinity(); N];
        for j in 0..self.mesh.ny {
            for i in 0..self.mesh.nx {
                if self.mesh.is_solid(i as isize, j as isize) {
                    continue;
                }
                let u = &field.avg[self.mesh.idx(i as isize, j as isize)];
                self.physics
                    .check_admissible(u)
                    .map_err(|source| SchemeError::Inadmissible { i, j, source })?;
                a = a.max(self.physics.max_speed(u, Axis::X));
                b = b.max(self.physics.max_speed(u, Axis::Y));
                for k in 0..N {
                    lo[k] = lo[k].min(u[k]);
                    hi[k] = hi[k].max(u[k]);
                }
            }
        }
        if lo[0] <= hi[0] {
            a = a.max(self.physics.range_speed(&lo, &hi, Axis::X));
            b = b.max(self.physics.range_speed(&lo, &hi, Axis::Y));
        }
        Ok((a, b))
    }

    /// Limits v̄ along rows and w̄ along columns in every cell the mode
    /// selects, reading from snapshots of both moments.
    pub fn limit(&mut self, field: &mut MomentField2D<T, N>, mask: &TroubledMask) -> Result<usize, SchemeError> {
        let mode = self.mode;
        if mode == SchemeMode::LinearUnlimited || (mode == SchemeMode::Hybrid && mask.flagged == 0) {
            return Ok(0);
        }
        let eps = self.kernel.epsilon();
        self.snap_x.clone_from(&field.mom_x);
        self.snap_y.clone_from(&field.mom_y);
        let (mesh, physics) = (&self.mesh, &self.physics);
        let (sx, sy, avg) = (&self.snap_x, &self.snap_y, &field.avg);
        let stride = mesh.stride();
        let limit_axis = |p: usize, step: usize, snap: &Vec<[T; N]>, axis: Axis, i: usize, j: usize| -> Result<[T; N], SchemeError> {
            let a = [avg[p - step], avg[p], avg[p + step]];
            let m = [snap[p - step], snap[p], snap[p + step]];
            if physics.is_system() {
                let es = physics
                    .eigensystem(&a[1], axis)
                    .map_err(|source| SchemeError::Inadmissible { i, j, source })?;
                let ca = a.map(|u| es.project(&u));
                let cm = m.map(|u| es.project(&u));
                let w: [T; N] = std::array::from_fn(|k| limit_first_moment(&row_stencil(&ca, &cm, k), eps));
                Ok(es.unproject(&w))
            } else {
                Ok(std::array::from_fn(|k| limit_first_moment(&row_stencil(&a, &m, k), eps)))
            }
        };
        field
            .mom_x
            .par_chunks_mut(stride)
            .zip(field.mom_y.par_chunks_mut(stride))
            .enumerate()
            .try_for_each(|(r, (row_x, row_y))| {
                let j = r as isize - crate::mesh::N_GHOST as isize;
                if j < 0 || j >= mesh.ny as isize {
                    return Ok::<(), SchemeError>(());
                }
                for i in 0..mesh.nx as isize {
                    let p = mesh.idx(i, j);
                    if mesh.is_solid(i, j) || !limits(mode, mask.get(p)) {
                        continue;
                    }
                    let c = p - r * stride;
                    row_x[c] = limit_axis(p, 1, sx, Axis::X, i as usize, j as usize)?;
                    row_y[c] = limit_axis(p, stride, sy, Axis::Y, i as usize, j as usize)?;
                }
                Ok(())
            })?;
        Ok(mask.flagged)
    }

    #[inline]
    fn gather(&self, f: &MomentField2D<T, N>, i: isize, j: isize) -> Gathered<T, N> {
        let mut d = [[T::zero(); N]; STENCIL_LEN];
        for k in 1..=9 {
            let (dx, dy) = label_offset(k);
            d[k - 1] = f.avg[self.mesh.idx(i + dx as isize, j + dy as isize)];
        }
        d[9] = f.mom_x[self.mesh.idx(i - 1, j)];
        d[10] = f.mom_x[self.mesh.idx(i, j)];
        d[11] = f.mom_x[self.mesh.idx(i + 1, j)];
        d[12] = f.mom_y[self.mesh.idx(i, j - 1)];
        d[13] = f.mom_y[self.mesh.idx(i, j)];
        d[14] = f.mom_y[self.mesh.idx(i, j + 1)];
        d
    }

    fn cell_traces(&self, f: &MomentField2D<T, N>, i: isize, j: isize, nonlin: bool) -> Result<[[T; N]; N_TARGETS], SchemeError> {
        let d = self.gather(f, i, j);
        let kernel = &self.kernel;
        let mut out = [[T::zero(); N]; N_TARGETS];
        let linear = |t: usize| {
            let row = kernel.linear_row(t);
            let mut acc = [T::zero(); N];
            for (w, u) in row.iter().zip(d.iter()) {
                for k in 0..N {
                    acc[k] += *w * u[k];
                }
            }
            acc
        };
        if !nonlin {
            for (t, o) in out.iter_mut().enumerate() {
                *o = linear(t);
            }
            return Ok(out);
        }
        for t in INTERIOR_TARGETS {
            out[t] = linear(t);
        }
        // stencil slots of the lower and upper neighbour across each face pair
        for (axis, first, faces) in [(Axis::X, X_FACE_TARGETS.start, [3, 5]), (Axis::Y, Y_FACE_TARGETS.start, [1, 7])] {
            if self.physics.is_system() {
                let half = lit::<T>(0.5);
                for (side, nb) in faces.into_iter().enumerate() {
                    let mean: [T; N] = std::array::from_fn(|k| half * (d[4][k] + d[nb][k]));
                    let es = self.physics.eigensystem(&mean, axis).map_err(|source| SchemeError::Inadmissible {
                        i: i.max(0) as usize,
                        j: j.max(0) as usize,
                        source,
                    })?;
                    let cd = d.map(|u| es.project(&u));
                    let mut w = [[T::zero(); N]; 2];
                    for k in 0..N {
                        let v: [T; 2] = kernel.hweno_values(first + 2 * side, &component(&cd, k));
                        w[0][k] = v[0];
                        w[1][k] = v[1];
                    }
                    out[first + 2 * side] = es.unproject(&w[0]);
                    out[first + 2 * side + 1] = es.unproject(&w[1]);
                }
            } else {
                for k in 0..N {
                    let v = kernel.hweno_face_values(first, &component(&d, k));
                    for q in 0..4 {
                        out[first + q][k] = v[q];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Point values at the twelve reconstruction points of every fluid
    /// cell and of the ghost ring that borders the interior.
    pub fn reconstruct(&mut self, field: &MomentField2D<T, N>, mask: &TroubledMask) -> Result<(), SchemeError> {
        let mode = self.mode;
        let (nx, ny) = (self.mesh.nx as isize, self.mesh.ny as isize);
        let stride = self.mesh.stride();
        let mut traces = std::mem::take(&mut self.traces);
        let res = traces.par_chunks_mut(stride).enumerate().try_for_each(|(r, row)| {
            let j = r as isize - crate::mesh::N_GHOST as isize;
            if j < -1 || j > ny {
                return Ok::<(), SchemeError>(());
            }
            let edge_row = j < 0 || j >= ny;
            let (lo, hi) = if edge_row { (0, nx - 1) } else { (-1, nx) };
            for i in lo..=hi {
                if self.mesh.is_blocked(i, j) {
                    continue;
                }
                let p = self.mesh.idx(i, j);
                row[p - r * stride] = self.cell_traces(field, i, j, nonlinear(mode, mask.get(p)))?;
            }
            Ok(())
        });
        self.traces = traces;
        res
    }

    /// Edge fluxes and the time derivatives of ū, v̄ and w̄.
    pub fn assemble(&mut self, field: &MomentField2D<T, N>, out: &mut MomentField2D<T, N>) -> Result<(), SchemeError> {
        let (alpha, beta) = self.wave_speeds(field)?;
        let (nx, ny) = (self.mesh.nx, self.mesh.ny);
        let mesh = &self.mesh;
        let physics = &self.physics;
        let traces = &self.traces;
        let nxm = physics.normal_momentum(Axis::X);
        let nym = physics.normal_momentum(Axis::Y);

        self.fx.par_chunks_mut(nx + 1).enumerate().for_each(|(j, row)| {
            let j = j as isize;
            for (i, slot) in row.iter_mut().enumerate() {
                let i = i as isize;
                let (bl, br) = (mesh.is_blocked(i - 1, j), mesh.is_blocked(i, j));
                if bl && br {
                    *slot = [[T::zero(); N]; 2];
                    continue;
                }
                let tl = &traces[mesh.idx(i - 1, j)];
                let tr = &traces[mesh.idx(i, j)];
                *slot = std::array::from_fn(|q| {
                    let mut ul = tl[X_FACE_TARGETS.start + 2 + q];
                    let mut ur = tr[X_FACE_TARGETS.start + q];
                    if br {
                        ur = reflect_avg(&ul, nxm);
                    } else if bl {
                        ul = reflect_avg(&ur, nxm);
                    }
                    super::lax_friedrichs(&ul, &ur, alpha, |u| physics.flux(u, Axis::X))
                });
            }
        });
        self.fy.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            let j = j as isize;
            for (i, slot) in row.iter_mut().enumerate() {
                let i = i as isize;
                let (bb, bt) = (mesh.is_blocked(i, j - 1), mesh.is_blocked(i, j));
                if bb && bt {
                    *slot = [[T::zero(); N]; 2];
                    continue;
                }
                let tb = &traces[mesh.idx(i, j - 1)];
                let tt = &traces[mesh.idx(i, j)];
                *slot = std::array::from_fn(|q| {
                    let mut ub = tb[Y_FACE_TARGETS.start + 2 + q];
                    let mut ut = tt[Y_FACE_TARGETS.start + q];
                    if bt {
                        ut = reflect_avg(&ub, nym);
                    } else if bb {
                        ub = reflect_avg(&ut, nym);
                    }
                    super::lax_friedrichs(&ub, &ut, beta, |u| physics.flux(u, Axis::Y))
                });
            }
        });

        let half = lit::<T>(0.5);
        let quarter = lit::<T>(0.25);
        let s = lit::<T>(3.0f64.sqrt() / 6.0);
        let pos = [-s, s];
        let inv_dx = T::one() / mesh.dx;
        let inv_dy = T::one() / mesh.dy;
        let (fx, fy) = (&self.fx, &self.fy);
        let stride = mesh.stride();
        out.avg
            .par_chunks_mut(stride)
            .zip(out.mom_x.par_chunks_mut(stride))
            .zip(out.mom_y.par_chunks_mut(stride))
            .enumerate()
            .for_each(|(r, ((da, dv), dw))| {
                let j = r as isize - crate::mesh::N_GHOST as isize;
                if j < 0 || j >= ny as isize {
                    return;
                }
                let ju = j as usize;
                for i in 0..nx {
                    let p = mesh.idx(i as isize, j);
                    let c = p - r * stride;
                    if mesh.is_solid(i as isize, j) {
                        da[c] = [T::zero(); N];
                        dv[c] = [T::zero(); N];
                        dw[c] = [T::zero(); N];
                        continue;
                    }
                    let fl = &fx[ju * (nx + 1) + i];
                    let fr = &fx[ju * (nx + 1) + i + 1];
                    let gb = &fy[ju * nx + i];
                    let gt = &fy[(ju + 1) * nx + i];
                    let tr = &traces[p];
                    let mut vol_f = [T::zero(); N];
                    let mut vol_g = [T::zero(); N];
                    for t in INTERIOR_TARGETS {
                        let f = physics.flux(&tr[t], Axis::X);
                        let g = physics.flux(&tr[t], Axis::Y);
                        for k in 0..N {
                            vol_f[k] += quarter * f[k];
                            vol_g[k] += quarter * g[k];
                        }
                    }
                    for k in 0..N {
                        let mut a = T::zero();
                        let mut v = T::zero();
                        let mut w = T::zero();
                        for q in 0..2 {
                            let dfx = fr[q][k] - fl[q][k];
                            let dgy = gt[q][k] - gb[q][k];
                            a -= half * (dfx * inv_dx + dgy * inv_dy);
                            v -= half * (half * (fl[q][k] + fr[q][k]) * inv_dx + pos[q] * dgy * inv_dy);
                            w -= half * (pos[q] * dfx * inv_dx + half * (gb[q][k] + gt[q][k]) * inv_dy);
                        }
                        da[c][k] = a;
                        dv[c][k] = v + vol_f[k] * inv_dx;
                        dw[c][k] = w + vol_g[k] * inv_dy;
                    }
                }
            });
        for j in 0..ny {
            for i in 0..nx {
                let p = mesh.idx(i as isize, j as isize);
                let ok = crate::scalar::all_finite(&out.avg[p])
                    && crate::scalar::all_finite(&out.mom_x[p])
                    && crate::scalar::all_finite(&out.mom_y[p]);
                if !ok {
                    return Err(SchemeError::NonFinite { i, j, phase: Phase::Flux });
                }
            }
        }
        Ok(())
    }

    /// Limits `field` in place, refreshes ghosts and writes the time
    /// derivative into `out`.
    pub fn compute_rhs(
        &mut self,
        field: &mut MomentField2D<T, N>,
        mask: &TroubledMask,
        t: T,
        out: &mut MomentField2D<T, N>,
        timings: &mut PhaseTimings,
    ) -> Result<(), SchemeError> {
        let clock = Instant::now();
        if self.limit(field, mask)? > 0 {
            self.apply_boundary(field, t);
        }
        timings.limit += clock.elapsed();

        let clock = Instant::now();
        self.reconstruct(field, mask)?;
        timings.reconstruct += clock.elapsed();

        let clock = Instant::now();
        let r = self.assemble(field, out);
        timings.flux += clock.elapsed();
        r
    }

    /// Point values last produced for cell `(i, j)`; see
    /// [`target_points`](crate::hweno2d::target_points) for the order.
    pub fn traces(&self, i: isize, j: isize) -> &[[T; N]; N_TARGETS] {
        &self.traces[self.mesh.idx(i, j)]
    }
}
