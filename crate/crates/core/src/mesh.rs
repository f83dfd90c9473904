//! Uniform structured grids with a two-cell ghost layer.

use thiserror::Error;

use crate::scalar::{lit, Real};

/// Ghost-layer width on every side. The troubled-cell indicator reads the
/// neighbour's quadratic, which in turn reads the neighbour's neighbour.
pub const N_GHOST: usize = 2;

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("invalid extent: [{lo}, {hi}] with {n} cells (need hi > lo and at least 3 cells)")]
    InvalidExtent { lo: f64, hi: f64, n: usize },
    #[error("solid block corner ({x}, {y}) is not aligned with cell faces")]
    MisalignedSolid { x: f64, y: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh1D<T> {
    pub x_lo: T,
    pub x_hi: T,
    pub n: usize,
    pub dx: T,
}

impl<T: Real> Mesh1D<T> {
    pub fn new(x_lo: T, x_hi: T, n: usize) -> Result<Self, MeshError> {
        if !(x_hi > x_lo) || n < 3 || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(MeshError::InvalidExtent {
                lo: x_lo.to_f64().unwrap_or(f64::NAN),
                hi: x_hi.to_f64().unwrap_or(f64::NAN),
                n,
            });
        }
        let dx = (x_hi - x_lo) / lit::<T>(n as f64);
        Ok(Self { x_lo, x_hi, n, dx })
    }

    /// Length of the padded storage (interior plus both ghost layers).
    pub fn n_padded(&self) -> usize {
        self.n + 2 * N_GHOST
    }

    /// Storage index of interior cell `i`.
    #[inline]
    pub fn padded(&self, i: usize) -> usize {
        i + N_GHOST
    }

    /// Interior index of storage slot `p`, if it is not a ghost.
    pub fn interior(&self, p: usize) -> Option<usize> {
        (p >= N_GHOST && p < self.n + N_GHOST).then(|| p - N_GHOST)
    }

    /// Centre of interior cell `i`.
    pub fn center(&self, i: usize) -> T {
        self.center_of_padded(self.padded(i))
    }

    /// Centre of storage slot `p`; ghosts extend the uniform spacing.
    pub fn center_of_padded(&self, p: usize) -> T {
        self.x_lo + (lit::<T>(p as f64) - lit::<T>(N_GHOST as f64) + lit::<T>(0.5)) * self.dx
    }

    pub fn extent(&self) -> T {
        self.x_hi - self.x_lo
    }
}

/// Rectangular solid obstacle occupying every cell with `i >= i_start` and
/// `j < j_end` (a forward-facing step attached to the bottom wall).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolidBlock {
    pub i_start: usize,
    pub j_end: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh2D<T> {
    pub x_lo: T,
    pub x_hi: T,
    pub y_lo: T,
    pub y_hi: T,
    pub nx: usize,
    pub ny: usize,
    pub dx: T,
    pub dy: T,
    pub solid: Option<SolidBlock>,
}

impl<T: Real> Mesh2D<T> {
    pub fn new(x_lo: T, x_hi: T, y_lo: T, y_hi: T, nx: usize, ny: usize) -> Result<Self, MeshError> {
        let mx = Mesh1D::new(x_lo, x_hi, nx)?;
        let my = Mesh1D::new(y_lo, y_hi, ny)?;
        Ok(Self { x_lo, x_hi, y_lo, y_hi, nx, ny, dx: mx.dx, dy: my.dx, solid: None })
    }

    /// Marks the cells right of `x_from` and below `y_to` as solid. Both
    /// coordinates must fall on cell faces.
    pub fn with_solid_block(mut self, x_from: T, y_to: T) -> Result<Self, MeshError> {
        let fi = ((x_from - self.x_lo) / self.dx).to_f64().unwrap_or(f64::NAN);
        let fj = ((y_to - self.y_lo) / self.dy).to_f64().unwrap_or(f64::NAN);
        let (ri, rj) = (fi.round(), fj.round());
        if (fi - ri).abs() > 1e-8 || (fj - rj).abs() > 1e-8 || ri < 1.0 || rj < 1.0 {
            return Err(MeshError::MisalignedSolid {
                x: x_from.to_f64().unwrap_or(f64::NAN),
                y: y_to.to_f64().unwrap_or(f64::NAN),
            });
        }
        self.solid = Some(SolidBlock { i_start: ri as usize, j_end: rj as usize });
        Ok(self)
    }

    /// Row stride of the padded storage.
    #[inline]
    pub fn stride(&self) -> usize {
        self.nx + 2 * N_GHOST
    }

    pub fn n_padded(&self) -> usize {
        self.stride() * (self.ny + 2 * N_GHOST)
    }

    /// Storage index of cell `(i, j)`; negative or past-the-end indices
    /// address ghost cells. Rows (fixed `j`) are contiguous.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let g = N_GHOST as isize;
        ((j + g) as usize) * self.stride() + (i + g) as usize
    }

    /// Inverse of [`idx`](Self::idx).
    pub fn ij(&self, p: usize) -> (isize, isize) {
        let g = N_GHOST as isize;
        ((p % self.stride()) as isize - g, (p / self.stride()) as isize - g)
    }

    #[inline]
    pub fn is_solid(&self, i: isize, j: isize) -> bool {
        match self.solid {
            Some(b) => i >= b.i_start as isize && j < b.j_end as isize && j >= 0 && i < self.nx as isize,
            None => false,
        }
    }

    /// Whether `(i, j)` lies in the obstacle or in the ghost frame beyond it.
    #[inline]
    pub fn is_blocked(&self, i: isize, j: isize) -> bool {
        match self.solid {
            Some(b) => i >= b.i_start as isize && j < b.j_end as isize,
            None => false,
        }
    }

    /// Number of interior cells that hold fluid.
    pub fn fluid_cells(&self) -> usize {
        match self.solid {
            Some(b) => self.nx * self.ny - (self.nx - b.i_start) * b.j_end,
            None => self.nx * self.ny,
        }
    }

    pub fn center(&self, i: isize, j: isize) -> (T, T) {
        let h = lit::<T>(0.5);
        (
            self.x_lo + (lit::<T>(i as f64) + h) * self.dx,
            self.y_lo + (lit::<T>(j as f64) + h) * self.dy,
        )
    }

    pub fn x_axis(&self) -> Mesh1D<T> {
        Mesh1D { x_lo: self.x_lo, x_hi: self.x_hi, n: self.nx, dx: self.dx }
    }

    pub fn y_axis(&self) -> Mesh1D<T> {
        Mesh1D { x_lo: self.y_lo, x_hi: self.y_hi, n: self.ny, dx: self.dy }
    }
}
