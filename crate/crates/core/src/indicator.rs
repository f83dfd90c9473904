//! KXRCF troubled-cell detection.

use rayon::prelude::*;

use crate::field::{MomentField1D, MomentField2D};
use crate::mesh::{Mesh1D, Mesh2D, N_GHOST};
use crate::physics::{Axis, ConservationLaw};
use crate::scalar::{lit, Real};

/// Quadratic part of the cubic Hermite reconstruction on the orthogonal
/// basis {1, ξ, ξ² − 1/12, ξ³ − 3ξ/20}. Only `u0..u2` enter `eval`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UhQuadratic<T> {
    pub u0: T,
    pub u1: T,
    pub u2: T,
    pub u3: T,
}

impl<T: Real> UhQuadratic<T> {
    #[inline]
    pub fn build(um: T, u0: T, up: T, v0: T) -> Self {
        let half = lit::<T>(0.5);
        Self {
            u0,
            u1: lit::<T>(12.0) * v0,
            u2: half * (um - lit::<T>(2.0) * u0 + up),
            u3: lit::<T>(-5.0 / 11.0) * (um + lit::<T>(24.0) * v0 - up),
        }
    }

    #[inline]
    pub fn eval(&self, xi: T) -> T {
        self.u0 + self.u1 * xi + self.u2 * (xi * xi - lit::<T>(1.0 / 12.0))
    }
}

/// Per-cell troubled flags over padded storage.
#[derive(Clone, Debug, PartialEq)]
pub struct TroubledMask {
    pub flags: Vec<bool>,
    /// Flagged interior (fluid) cells.
    pub flagged: usize,
    /// Interior (fluid) cells.
    pub cells: usize,
}

impl TroubledMask {
    pub fn uniform(len: usize, cells: usize, value: bool) -> Self {
        Self { flags: vec![value; len], flagged: if value { cells } else { 0 }, cells }
    }

    pub fn fraction(&self) -> f64 {
        if self.cells == 0 {
            0.0
        } else {
            self.flagged as f64 / self.cells as f64
        }
    }

    #[inline]
    pub fn get(&self, p: usize) -> bool {
        self.flags[p]
    }
}

/// Ghost-cell flag source: periodic wrap or the nearest interior cell.
#[inline]
fn source(i: isize, n: usize, periodic: bool) -> isize {
    let n = n as isize;
    if periodic {
        i.rem_euclid(n)
    } else {
        i.clamp(0, n - 1)
    }
}

/// Values of a cell's quadratic at ξ = −½ and ½, and its sampled max-norm.
#[derive(Clone, Copy, Debug, Default)]
struct Trace<T> {
    lo: T,
    hi: T,
    norm: T,
}

#[inline]
fn trace<T: Real>(um: T, u0: T, up: T, v0: T, g: T) -> Trace<T> {
    let half = lit::<T>(0.5);
    let q = UhQuadratic::build(um, u0, up, v0);
    let (lo, hi) = (q.eval(-half), q.eval(half));
    let norm = lo.abs().max(hi.abs()).max(q.eval(g).abs()).max(q.eval(-g).abs());
    Trace { lo, hi, norm }
}

/// Jump/norm test for one direction of one cell from the traces of the cell
/// and its two neighbours; `vel` is the indicator velocity at the three
/// cells and `open` whether each face touches fluid.
#[inline]
fn kxrcf_test<T: Real>(t: [Trace<T>; 3], centre: T, vel: [T; 3], open: [bool; 2], h32: T) -> bool {
    let half = lit::<T>(0.5);
    let inflow_l = open[0] && half * (vel[0] + vel[1]) > T::zero();
    let inflow_r = open[1] && half * (vel[1] + vel[2]) < T::zero();
    if !inflow_l && !inflow_r {
        return false;
    }
    let mut jump = T::zero();
    let mut count = T::zero();
    if inflow_l {
        jump += (t[1].lo - t[0].hi).abs();
        count += T::one();
    }
    if inflow_r {
        jump += (t[1].hi - t[2].lo).abs();
        count += T::one();
    }
    let denom = h32 * count * t[1].norm;
    if denom < lit::<T>(1e-13) * (T::one() + centre.abs()) {
        return false;
    }
    jump > denom
}

/// Troubled cells of a 1D field whose ghosts are filled. Ghost flags copy
/// the periodic image or the nearest interior cell.
pub fn kxrcf_flag_1d<T: Real, P: ConservationLaw<T, N>, const N: usize>(
    field: &MomentField1D<T, N>,
    physics: &P,
    mesh: &Mesh1D<T>,
    periodic: bool,
) -> TroubledMask {
    let h = mesh.dx * lit::<T>(0.5);
    let h32 = h * h.sqrt();
    let g = lit::<T>(5.0f64.sqrt() / 10.0);
    let comps = physics.indicator_components();
    let nc = comps.len();
    let (avg, mom) = (&field.avg, &field.mom_x);
    // traces of the interior cells and one ghost on each side
    let first = N_GHOST - 1;
    let traces: Vec<Trace<T>> = (0..(mesh.n + 2) * nc)
        .into_par_iter()
        .with_min_len(4096)
        .map(|q| {
            let (p, m) = (first + q / nc, comps[q % nc]);
            trace(avg[p - 1][m], avg[p][m], avg[p + 1][m], mom[p][m], g)
        })
        .collect();
    let vels: Vec<T> = (first..first + mesh.n + 2).map(|p| physics.indicator_velocity(&avg[p], Axis::X)).collect();
    let interior: Vec<bool> = (0..mesh.n)
        .into_par_iter()
        .with_min_len(4096)
        .map(|i| {
            let p = mesh.padded(i);
            let vel = [vels[i], vels[i + 1], vels[i + 2]];
            (0..nc).any(|c| {
                let t = [i, i + 1, i + 2].map(|k| traces[k * nc + c]);
                kxrcf_test(t, avg[p][comps[c]], vel, [true, true], h32)
            })
        })
        .collect();
    let mut flags = vec![false; mesh.n_padded()];
    for (p, slot) in flags.iter_mut().enumerate() {
        let i = source(p as isize - N_GHOST as isize, mesh.n, periodic);
        *slot = interior[i as usize];
    }
    let flagged = interior.iter().filter(|v| **v).count();
    TroubledMask { flags, flagged, cells: mesh.n }
}

/// Raw (pre-spread) 2D flags over padded storage; ghosts copy periodic
/// images or the nearest interior cell.
pub fn kxrcf_raw_2d<T: Real, P: ConservationLaw<T, N>, const N: usize>(
    field: &MomentField2D<T, N>,
    physics: &P,
    mesh: &Mesh2D<T>,
    periodic: (bool, bool),
) -> Vec<bool> {
    let h = (mesh.dx * mesh.dx + mesh.dy * mesh.dy).sqrt() * lit::<T>(0.5);
    let h32 = h * h.sqrt();
    let g = lit::<T>(3.0f64.sqrt() / 6.0);
    let comps = physics.indicator_components();
    let nc = comps.len();
    let (nx, ny) = (mesh.nx, mesh.ny);
    let stride = mesh.stride();
    let avg = &field.avg;
    // x traces on rows 0..ny, y traces on columns 0..nx, one ghost beyond
    // the interior along the direction of each
    let mut tx = vec![Trace::default(); mesh.n_padded() * nc];
    let mut ty = vec![Trace::default(); mesh.n_padded() * nc];
    tx.par_chunks_mut(stride * nc).zip(ty.par_chunks_mut(stride * nc)).enumerate().for_each(|(r, (rx, ry))| {
        let j = r as isize - N_GHOST as isize;
        let (row_in, row_near) = (j >= 0 && j < ny as isize, j >= -1 && j <= ny as isize);
        for c in 0..stride {
            let i = c as isize - N_GHOST as isize;
            let p = mesh.idx(i, j);
            for (k, &m) in comps.iter().enumerate() {
                if row_in && i >= -1 && i <= nx as isize {
                    rx[c * nc + k] = trace(avg[p - 1][m], avg[p][m], avg[p + 1][m], field.mom_x[p][m], g);
                }
                if row_near && i >= 0 && i < nx as isize {
                    ry[c * nc + k] = trace(avg[p - stride][m], avg[p][m], avg[p + stride][m], field.mom_y[p][m], g);
                }
            }
        }
    });
    let mut interior = vec![false; nx * ny];
    interior.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        for (i, slot) in row.iter_mut().enumerate() {
            let (i, j) = (i as isize, j as isize);
            if mesh.is_solid(i, j) {
                continue;
            }
            let p = mesh.idx(i, j);
            *slot = [(Axis::X, 1, &tx), (Axis::Y, stride, &ty)].into_iter().any(|(axis, step, tr)| {
                let (lo, hi) = match axis {
                    Axis::X => (mesh.is_solid(i - 1, j), mesh.is_solid(i + 1, j)),
                    Axis::Y => (mesh.is_solid(i, j - 1), mesh.is_solid(i, j + 1)),
                };
                let vel = [p - step, p, p + step].map(|q| physics.indicator_velocity(&avg[q], axis));
                (0..nc).any(|k| {
                    let t = [p - step, p, p + step].map(|q| tr[q * nc + k]);
                    kxrcf_test(t, avg[p][comps[k]], vel, [!lo, !hi], h32)
                })
            });
        }
    });
    let mut raw = vec![false; mesh.n_padded()];
    for (p, slot) in raw.iter_mut().enumerate() {
        let (i, j) = mesh.ij(p);
        if mesh.is_solid(i, j) {
            continue;
        }
        let si = source(i, nx, periodic.0) as usize;
        let sj = source(j, ny, periodic.1) as usize;
        *slot = interior[sj * nx + si];
    }
    raw
}

/// Marks every flagged cell's four edge neighbours as well.
pub fn spread_2d<T: Real>(raw: &[bool], mesh: &Mesh2D<T>) -> TroubledMask {
    let stride = mesh.stride();
    let rows = raw.len() / stride;
    let mut flags = vec![false; raw.len()];
    for (p, slot) in flags.iter_mut().enumerate() {
        let (c, r) = (p % stride, p / stride);
        let (i, j) = mesh.ij(p);
        if mesh.is_solid(i, j) {
            continue;
        }
        *slot = raw[p]
            || (c > 0 && raw[p - 1])
            || (c + 1 < stride && raw[p + 1])
            || (r > 0 && raw[p - stride])
            || (r + 1 < rows && raw[p + stride]);
    }
    let mut flagged = 0;
    for j in 0..mesh.ny as isize {
        for i in 0..mesh.nx as isize {
            if flags[mesh.idx(i, j)] {
                flagged += 1;
            }
        }
    }
    TroubledMask { flags, flagged, cells: mesh.fluid_cells() }
}

/// Post-spread troubled cells of a 2D field whose ghosts are filled.
pub fn kxrcf_flag_2d<T: Real, P: ConservationLaw<T, N>, const N: usize>(
    field: &MomentField2D<T, N>,
    physics: &P,
    mesh: &Mesh2D<T>,
    periodic: (bool, bool),
) -> TroubledMask {
    spread_2d(&kxrcf_raw_2d(field, physics, mesh, periodic), mesh)
}
