use std::time::Instant;

use rayon::prelude::*;

use super::{limits, nonlinear, Phase, PhaseTimings, SchemeError, SchemeMode};
use crate::field::{Boundary1D, MomentField1D};
use crate::hweno1d::{
    hweno_interface, limit_first_moment, linear_interface, linear_internal, Side, Stencil1D, EPSILON,
};
use crate::indicator::{kxrcf_flag_1d, TroubledMask};
use crate::mesh::{Mesh1D, N_GHOST};
use crate::physics::{Axis, ConservationLaw};
use crate::quadrature::lobatto4;
use crate::scalar::{lit, Real};

const MIN_LEN: usize = 2048;

/// The 1D scheme: grid, law, boundaries, mode and scratch buffers.
pub struct Scheme1D<T, P, const N: usize> {
    pub mesh: Mesh1D<T>,
    pub physics: P,
    pub bc: Boundary1D<T, N>,
    pub mode: SchemeMode,
    pub eps: T,
    snapshot: Vec<[T; N]>,
    /// Values at ξ = −½, −√5/10, √5/10, ½ for each padded cell.
    traces: Vec<[[T; N]; 4]>,
    fluxes: Vec<[T; N]>,
}

#[inline]
fn stencil<T: Real, const N: usize>(avg: &[[T; N]; 3], mom: &[[T; N]; 3], k: usize) -> Stencil1D<T> {
    Stencil1D::new([avg[0][k], avg[1][k], avg[2][k]], [mom[0][k], mom[1][k], mom[2][k]])
}

fn interior_index(p: usize, n: usize) -> usize {
    p.saturating_sub(N_GHOST).min(n - 1)
}

impl<T: Real, P: ConservationLaw<T, N>, const N: usize> Scheme1D<T, P, N> {
    pub fn new(mesh: Mesh1D<T>, physics: P, bc: Boundary1D<T, N>, mode: SchemeMode) -> Result<Self, SchemeError> {
        bc.validate()?;
        let n = mesh.n_padded();
        Ok(Self {
            snapshot: vec![[T::zero(); N]; n],
            traces: vec![[[T::zero(); N]; 4]; n],
            fluxes: vec![[T::zero(); N]; mesh.n + 1],
            mesh,
            physics,
            bc,
            mode,
            eps: lit(EPSILON),
        })
    }

    pub fn periodic(&self) -> bool {
        self.bc.left.is_periodic()
    }

    pub fn apply_boundary(&self, field: &mut MomentField1D<T, N>, t: T) {
        field.apply_boundary(&self.bc, t, &self.mesh, &self.physics);
    }

    /// Troubled cells for the current mode: KXRCF for the hybrid scheme,
    /// everything or nothing otherwise.
    pub fn detect(&self, field: &MomentField1D<T, N>) -> TroubledMask {
        let len = self.mesh.n_padded();
        match self.mode {
            SchemeMode::Hybrid => kxrcf_flag_1d(field, &self.physics, &self.mesh, self.periodic()),
            SchemeMode::LimitAll => TroubledMask::uniform(len, self.mesh.n, true),
            SchemeMode::LinearUnlimited => TroubledMask::uniform(len, self.mesh.n, false),
        }
    }

    /// Global wave-speed bound over interior cell averages and the range
    /// they span.
    pub fn wave_speed(&self, field: &MomentField1D<T, N>) -> Result<T, SchemeError> {
        let mut alpha = T::zero();
        let mut lo = [T::infinity(); N];
        let mut hi = [T::neg_infinity(); N];
        for i in 0..self.mesh.n {
            let u = &field.avg[self.mesh.padded(i)];
            self.physics
                .check_admissible(u)
                .map_err(|source| SchemeError::Inadmissible { i, j: 0, source })?;
            alpha = alpha.max(self.physics.max_speed(u, Axis::X));
            for k in 0..N {
                lo[k] = lo[k].min(u[k]);
                hi[k] = hi[k].max(u[k]);
            }
        }
        Ok(alpha.max(self.physics.range_speed(&lo, &hi, Axis::X)))
    }

    /// Replaces the first moment of every cell the mode limits. Reads come
    /// from a snapshot, so the result does not depend on visiting order.
    pub fn limit(&mut self, field: &mut MomentField1D<T, N>, mask: &TroubledMask) -> Result<usize, SchemeError> {
        let (mode, eps, n) = (self.mode, self.eps, self.mesh.n);
        if mode == SchemeMode::LinearUnlimited || (mode == SchemeMode::Hybrid && mask.flagged == 0) {
            return Ok(0);
        }
        self.snapshot.clone_from(&field.mom_x);
        let snap = &self.snapshot;
        let avg = &field.avg;
        let physics = &self.physics;
        field.mom_x[N_GHOST..N_GHOST + n]
            .par_iter_mut()
            .with_min_len(MIN_LEN)
            .enumerate()
            .try_for_each(|(i, slot)| {
                let p = i + N_GHOST;
                if !limits(mode, mask.get(p)) {
                    return Ok::<(), SchemeError>(());
                }
                let a = [avg[p - 1], avg[p], avg[p + 1]];
                let m = [snap[p - 1], snap[p], snap[p + 1]];
                if physics.is_system() {
                    let es = physics
                        .eigensystem(&a[1], Axis::X)
                        .map_err(|source| SchemeError::Inadmissible { i, j: 0, source })?;
                    let ca = a.map(|u| es.project(&u));
                    let cm = m.map(|u| es.project(&u));
                    let w: [T; N] = std::array::from_fn(|k| limit_first_moment(&stencil(&ca, &cm, k), eps));
                    *slot = es.unproject(&w);
                } else {
                    *slot = std::array::from_fn(|k| limit_first_moment(&stencil(&a, &m, k), eps));
                }
                Ok(())
            })?;
        Ok(if mode == SchemeMode::LimitAll { n } else { mask.flagged })
    }

    /// Point values at the four Gauss–Lobatto points of every interior cell
    /// and of the first ghost on each side.
    pub fn reconstruct(&mut self, field: &MomentField1D<T, N>, mask: &TroubledMask) -> Result<(), SchemeError> {
        let (mode, eps, n) = (self.mode, self.eps, self.mesh.n);
        let half = lit::<T>(0.5);
        let physics = &self.physics;
        self.traces[N_GHOST - 1..N_GHOST + n + 1]
            .par_iter_mut()
            .with_min_len(MIN_LEN)
            .enumerate()
            .try_for_each(|(q, slot)| {
                let p = q + N_GHOST - 1;
                let a = [field.avg[p - 1], field.avg[p], field.avg[p + 1]];
                let m = [field.mom_x[p - 1], field.mom_x[p], field.mom_x[p + 1]];
                let mut out = [[T::zero(); N]; 4];
                for k in 0..N {
                    let (lo, hi) = linear_internal(&stencil(&a, &m, k));
                    out[1][k] = lo;
                    out[2][k] = hi;
                }
                let near = mask.get(p - 1) || mask.get(p) || mask.get(p + 1);
                if !nonlinear(mode, near) {
                    for k in 0..N {
                        let (l, r) = linear_interface(&stencil(&a, &m, k));
                        out[0][k] = l;
                        out[3][k] = r;
                    }
                } else if physics.is_system() {
                    // each face uses the eigensystem of the mean of its two cells
                    for (side, nb, slot) in [(Side::Left, 0, 0), (Side::Right, 2, 3)] {
                        let mean: [T; N] = std::array::from_fn(|k| half * (a[1][k] + a[nb][k]));
                        let es = physics
                            .eigensystem(&mean, Axis::X)
                            .map_err(|source| SchemeError::Inadmissible { i: interior_index(p, n), j: 0, source })?;
                        let ca = a.map(|u| es.project(&u));
                        let cm = m.map(|u| es.project(&u));
                        let w: [T; N] = std::array::from_fn(|k| hweno_interface(&stencil(&ca, &cm, k), side, eps));
                        out[slot] = es.unproject(&w);
                    }
                } else {
                    for k in 0..N {
                        let s = stencil(&a, &m, k);
                        out[0][k] = hweno_interface(&s, Side::Left, eps);
                        out[3][k] = hweno_interface(&s, Side::Right, eps);
                    }
                }
                *slot = out;
                Ok(())
            })
    }

    /// Face fluxes and the time derivatives of averages and moments.
    pub fn assemble(&mut self, field: &MomentField1D<T, N>, out: &mut MomentField1D<T, N>) -> Result<(), SchemeError> {
        let alpha = self.wave_speed(field)?;
        let n = self.mesh.n;
        let physics = &self.physics;
        let traces = &self.traces;
        self.fluxes.par_iter_mut().with_min_len(MIN_LEN).enumerate().for_each(|(k, slot)| {
            let ul = &traces[N_GHOST + k - 1][3];
            let ur = &traces[N_GHOST + k][0];
            *slot = super::lax_friedrichs(ul, ur, alpha, |u| physics.flux(u, Axis::X));
        });
        let (_, w) = lobatto4::<T>();
        let inv_dx = T::one() / self.mesh.dx;
        let half = lit::<T>(0.5);
        let fluxes = &self.fluxes;
        let (avg, mom) = (&mut out.avg[N_GHOST..N_GHOST + n], &mut out.mom_x[N_GHOST..N_GHOST + n]);
        avg.par_iter_mut()
            .zip(mom.par_iter_mut())
            .with_min_len(MIN_LEN)
            .enumerate()
            .for_each(|(i, (da, dm))| {
                let tr = &traces[i + N_GHOST];
                let fv: [[T; N]; 4] = std::array::from_fn(|l| physics.flux(&tr[l], Axis::X));
                let (fl, fr) = (&fluxes[i], &fluxes[i + 1]);
                for k in 0..N {
                    let vol = w[0] * fv[0][k] + w[1] * fv[1][k] + w[2] * fv[2][k] + w[3] * fv[3][k];
                    da[k] = -(fr[k] - fl[k]) * inv_dx;
                    dm[k] = -half * (fl[k] + fr[k]) * inv_dx + vol * inv_dx;
                }
            });
        for i in 0..n {
            let p = i + N_GHOST;
            if !crate::scalar::all_finite(&out.avg[p]) || !crate::scalar::all_finite(&out.mom_x[p]) {
                return Err(SchemeError::NonFinite { i, j: 0, phase: Phase::Flux });
            }
        }
        Ok(())
    }

    /// Limits `field` in place for the given mask, refreshes ghosts, and
    /// writes the semi-discrete time derivative into `out`.
    pub fn compute_rhs(
        &mut self,
        field: &mut MomentField1D<T, N>,
        mask: &TroubledMask,
        t: T,
        out: &mut MomentField1D<T, N>,
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

    /// Point values last produced by [`reconstruct`](Self::reconstruct) for
    /// interior cell `i`, at ξ = −½, −√5/10, √5/10, ½.
    pub fn traces(&self, i: usize) -> &[[T; N]; 4] {
        &self.traces[i + N_GHOST]
    }
}
