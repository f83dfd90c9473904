//! Two-dimensional HWENO kernels on the 3×3 moment stencil.
//!
//! Cells are labelled 1..9 row by row from the lower left, so label 5 is
//! the target cell (i, j), label 4 is (i−1, j) and label 8 is (i, j+1).
//! A stencil vector holds 15 entries: the nine averages ū_1..ū_9, then
//! v̄_4, v̄_5, v̄_6, then w̄_2, w̄_5, w̄_8.
//!
//! Each of the eight candidates lives in span{1, ξ, η, ξ², ξη, η², ξ³, η³}
//! and is pinned by eight of those data. The matrices are assembled and
//! inverted once when a [`Kernel2D`] is built.

use thiserror::Error;

use crate::linalg::{invert, mat_vec};
use crate::scalar::{lit, Real};

pub const STENCIL_LEN: usize = 15;
pub const N_CANDIDATES: usize = 8;
pub const N_TARGETS: usize = 12;

/// Monomial exponents of the candidate basis, in coefficient order.
pub const BASIS: [(i32, i32); 8] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (0, 3)];

/// Averages, x-moments and y-moments used by each candidate (cell labels).
pub const CANDIDATE_CELLS: [(&[usize], &[usize], &[usize]); 8] = [
    (&[1, 2, 4, 5], &[4, 5], &[2, 5]),
    (&[2, 3, 5, 6], &[5, 6], &[2, 5]),
    (&[4, 5, 7, 8], &[4, 5], &[5, 8]),
    (&[5, 6, 8, 9], &[5, 6], &[5, 8]),
    (&[1, 2, 3, 4, 5, 7], &[5], &[5]),
    (&[1, 2, 3, 5, 6, 9], &[5], &[5]),
    (&[1, 4, 5, 7, 8, 9], &[5], &[5]),
    (&[3, 5, 6, 7, 8, 9], &[5], &[5]),
];

/// `(dx, dy)` offset of a cell label.
pub fn label_offset(k: usize) -> (i32, i32) {
    (((k - 1) % 3) as i32 - 1, ((k - 1) / 3) as i32 - 1)
}

/// Position of ū_k, v̄_k or w̄_k in the 15-entry stencil vector.
pub fn avg_slot(k: usize) -> usize {
    k - 1
}

pub fn mom_x_slot(k: usize) -> Option<usize> {
    match k {
        4 => Some(9),
        5 => Some(10),
        6 => Some(11),
        _ => None,
    }
}

pub fn mom_y_slot(k: usize) -> Option<usize> {
    match k {
        2 => Some(12),
        5 => Some(13),
        8 => Some(14),
        _ => None,
    }
}

/// Reconstruction points in local coordinates: indices 0..4 lie on the
/// x-faces ((−½, ∓s), (½, ∓s)), 4..8 on the y-faces ((∓s, −½), (∓s, ½)),
/// 8..12 inside the cell, with s = √3/6.
pub fn target_points() -> [(f64, f64); N_TARGETS] {
    let s = 3.0f64.sqrt() / 6.0;
    [
        (-0.5, -s),
        (-0.5, s),
        (0.5, -s),
        (0.5, s),
        (-s, -0.5),
        (s, -0.5),
        (-s, 0.5),
        (s, 0.5),
        (-s, -s),
        (s, -s),
        (-s, s),
        (s, s),
    ]
}

pub const X_FACE_TARGETS: std::ops::Range<usize> = 0..4;
pub const Y_FACE_TARGETS: std::ops::Range<usize> = 4..8;
pub const INTERIOR_TARGETS: std::ops::Range<usize> = 8..12;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("candidate {0} has a singular defining system")]
    SingularCandidate(usize),
    #[error("candidate {candidate} misses its defining conditions by {residual:e}")]
    Residual { candidate: usize, residual: f64 },
    #[error("linear-weight constraints are infeasible at target {0}")]
    Infeasible(usize),
    #[error("linear weights at target {target} violate {what}")]
    BadWeights { target: usize, what: &'static str },
}

/// Average of ξ^a over [c − ½, c + ½].
fn mono_avg(a: i32, c: f64) -> f64 {
    let p = (a + 1) as f64;
    ((c + 0.5).powi(a + 1) - (c - 0.5).powi(a + 1)) / p
}

/// Average of ξ^a (ξ − c) over [c − ½, c + ½].
fn mono_mom(a: i32, c: f64) -> f64 {
    mono_avg(a + 1, c) - c * mono_avg(a, c)
}

/// Stencil vector generated by the monomial ξ^a η^b.
pub fn monomial_stencil(a: i32, b: i32) -> [f64; STENCIL_LEN] {
    let mut d = [0.0; STENCIL_LEN];
    for k in 1..=9 {
        let (cx, cy) = label_offset(k);
        let (cx, cy) = (cx as f64, cy as f64);
        d[avg_slot(k)] = mono_avg(a, cx) * mono_avg(b, cy);
        if let Some(s) = mom_x_slot(k) {
            d[s] = mono_mom(a, cx) * mono_avg(b, cy);
        }
        if let Some(s) = mom_y_slot(k) {
            d[s] = mono_avg(a, cx) * mono_mom(b, cy);
        }
    }
    d
}

/// The data slots pinning candidate `n`, in row order of its system.
pub fn candidate_slots(n: usize) -> [usize; 8] {
    let (avg, mx, my) = CANDIDATE_CELLS[n];
    let mut out = [0; 8];
    let mut r = 0;
    for &k in avg {
        out[r] = avg_slot(k);
        r += 1;
    }
    for &k in mx {
        out[r] = mom_x_slot(k).expect("x-moment label");
        r += 1;
    }
    for &k in my {
        out[r] = mom_y_slot(k).expect("y-moment label");
        r += 1;
    }
    out
}

fn basis_at(xi: f64, eta: f64) -> [f64; 8] {
    BASIS.map(|(a, b)| xi.powi(a) * eta.powi(b))
}

/// Closed-form smoothness indicator of an incomplete cubic with
/// coefficients on [`BASIS`], integrated over the unit cell.
#[inline]
pub fn smoothness_2d<T: Real>(a: &[T; 8]) -> T {
    let half = lit::<T>(0.5);
    let third = lit::<T>(1.0 / 3.0);
    let twelfth = lit::<T>(1.0 / 12.0);
    let k80 = lit::<T>(9.0 / 80.0);
    let three = lit::<T>(3.0);
    let four = lit::<T>(4.0);
    let k36 = lit::<T>(36.0);
    let first = a[1] * a[1] + half * a[1] * a[6] + third * a[3] * a[3] + twelfth * a[4] * a[4] + k80 * a[6] * a[6]
        + a[2] * a[2]
        + half * a[2] * a[7]
        + third * a[5] * a[5]
        + twelfth * a[4] * a[4]
        + k80 * a[7] * a[7];
    let second = four * a[3] * a[3] + three * a[6] * a[6] + a[4] * a[4] + four * a[5] * a[5] + three * a[7] * a[7];
    let third_order = k36 * (a[6] * a[6] + a[7] * a[7]);
    first + second + third_order
}

/// Evaluation mode for a reconstruction point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointMode {
    Hweno,
    Linear,
}

/// Precomputed tables for the 2D reconstruction.
#[derive(Clone, Debug)]
pub struct Kernel2D<T> {
    /// Rows of the inverse defining system, one 8×8 block per candidate.
    inverse: [[[T; 8]; 8]; N_CANDIDATES],
    slots: [[usize; 8]; N_CANDIDATES],
    basis: [[T; 8]; N_TARGETS],
    gamma: [[T; N_CANDIDATES]; N_TARGETS],
    /// Σ_n γ_n p_n(G) as one row acting on the stencil vector.
    linear: [[T; STENCIL_LEN]; N_TARGETS],
    eps: T,
}

impl<T: Real> Kernel2D<T> {
    pub fn new() -> Result<Self, KernelError> {
        Self::with_epsilon(lit(crate::hweno1d::EPSILON))
    }

    pub fn with_epsilon(eps: T) -> Result<Self, KernelError> {
        let mut inverse = [[[0.0f64; 8]; 8]; N_CANDIDATES];
        let mut slots = [[0usize; 8]; N_CANDIDATES];
        let rows: Vec<[f64; STENCIL_LEN]> = BASIS.iter().map(|&(a, b)| monomial_stencil(a, b)).collect();
        for n in 0..N_CANDIDATES {
            slots[n] = candidate_slots(n);
            let mut m = [[0.0; 8]; 8];
            for (r, &s) in slots[n].iter().enumerate() {
                for c in 0..8 {
                    m[r][c] = rows[c][s];
                }
            }
            inverse[n] = invert(&m).ok_or(KernelError::SingularCandidate(n))?;
            // every basis function must come back exactly
            for (c, row) in rows.iter().enumerate() {
                let coeffs = mat_vec(&inverse[n], &slots[n].map(|s| row[s]));
                let residual = coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, v)| (v - if k == c { 1.0 } else { 0.0 }).abs())
                    .fold(0.0, f64::max);
                if residual > 1e-10 {
                    return Err(KernelError::Residual { candidate: n, residual });
                }
            }
        }

        let eval = |n: usize, data: &[f64; STENCIL_LEN], g: (f64, f64)| -> f64 {
            let a = mat_vec(&inverse[n], &slots[n].map(|s| data[s]));
            basis_at(g.0, g.1).iter().zip(a.iter()).map(|(p, q)| p * q).sum()
        };
        let x2y = monomial_stencil(2, 1);
        let xy2 = monomial_stencil(1, 2);
        let mut gamma = [[0.0f64; N_CANDIDATES]; N_TARGETS];
        for (t, &g) in target_points().iter().enumerate() {
            let mut c = [[1.0f64; N_CANDIDATES]; 3];
            for n in 0..N_CANDIDATES {
                c[1][n] = eval(n, &x2y, g);
                c[2][n] = eval(n, &xy2, g);
            }
            let b = [1.0, g.0 * g.0 * g.1, g.0 * g.1 * g.1];
            gamma[t] = min_norm_weights(&c, &b).ok_or(KernelError::Infeasible(t))?;
        }
        check_weights(&gamma)?;

        let mut linear = [[0.0f64; STENCIL_LEN]; N_TARGETS];
        let basis64: Vec<[f64; 8]> = target_points().iter().map(|g| basis_at(g.0, g.1)).collect();
        for t in 0..N_TARGETS {
            for n in 0..N_CANDIDATES {
                for (r, &s) in slots[n].iter().enumerate() {
                    let w: f64 = (0..8).map(|c| basis64[t][c] * inverse[n][c][r]).sum();
                    linear[t][s] += gamma[t][n] * w;
                }
            }
        }

        Ok(Self {
            inverse: inverse.map(|m| m.map(|r| r.map(lit))),
            slots,
            basis: std::array::from_fn(|t| basis64[t].map(lit)),
            gamma: gamma.map(|r| r.map(lit)),
            linear: linear.map(|r| r.map(lit)),
            eps,
        })
    }

    pub fn epsilon(&self) -> T {
        self.eps
    }

    pub fn linear_weights(&self, target: usize) -> &[T; N_CANDIDATES] {
        &self.gamma[target]
    }

    /// Coefficients of candidate `n` on [`BASIS`].
    #[inline]
    pub fn candidate(&self, n: usize, data: &[T; STENCIL_LEN]) -> [T; 8] {
        let m = &self.inverse[n];
        let s = &self.slots[n];
        let d = [data[s[0]], data[s[1]], data[s[2]], data[s[3]], data[s[4]], data[s[5]], data[s[6]], data[s[7]]];
        let mut a = [T::zero(); 8];
        for (ak, row) in a.iter_mut().zip(m.iter()) {
            let mut acc = T::zero();
            for r in 0..8 {
                acc += row[r] * d[r];
            }
            *ak = acc;
        }
        a
    }

    pub fn solve_candidates(&self, data: &[T; STENCIL_LEN]) -> [[T; 8]; N_CANDIDATES] {
        std::array::from_fn(|n| self.candidate(n, data))
    }

    #[inline]
    fn eval(&self, target: usize, a: &[T; 8]) -> T {
        let b = &self.basis[target];
        let mut acc = T::zero();
        for k in 0..8 {
            acc += b[k] * a[k];
        }
        acc
    }

    /// Linear reconstruction at one target.
    #[inline]
    pub fn linear_row(&self, target: usize) -> &[T; STENCIL_LEN] {
        &self.linear[target]
    }

    pub fn linear_at(&self, target: usize, data: &[T; STENCIL_LEN]) -> T {
        let row = &self.linear[target];
        let mut acc = T::zero();
        for k in 0..STENCIL_LEN {
            acc += row[k] * data[k];
        }
        acc
    }

    /// Nonlinear values at four consecutive targets starting at `first`
    /// (one face pair: `X_FACE_TARGETS.start` or `Y_FACE_TARGETS.start`).
    #[inline]
    pub fn hweno_face_values(&self, first: usize, data: &[T; STENCIL_LEN]) -> [T; 4] {
        self.hweno_values(first, data)
    }

    /// Nonlinear values at `K` consecutive face targets starting at `first`.
    #[inline]
    pub fn hweno_values<const K: usize>(&self, first: usize, data: &[T; STENCIL_LEN]) -> [T; K] {
        let mut inv_sq = [T::zero(); N_CANDIDATES];
        let mut vals = [[T::zero(); N_CANDIDATES]; K];
        for n in 0..N_CANDIDATES {
            let a = self.candidate(n, data);
            let d = smoothness_2d(&a) + self.eps;
            inv_sq[n] = T::one() / (d * d);
            for (q, v) in vals.iter_mut().enumerate() {
                v[n] = self.eval(first + q, &a);
            }
        }
        std::array::from_fn(|q| {
            let g = &self.gamma[first + q];
            let mut num = T::zero();
            let mut den = T::zero();
            for n in 0..N_CANDIDATES {
                let w = g[n] * inv_sq[n];
                num += w * vals[q][n];
                den += w;
            }
            num / den
        })
    }

    /// Value at one target. Interior targets are always linear.
    pub fn reconstruct_point(&self, data: &[T; STENCIL_LEN], target: usize, mode: PointMode) -> T {
        if mode == PointMode::Linear || INTERIOR_TARGETS.contains(&target) {
            return self.linear_at(target, data);
        }
        let first = if X_FACE_TARGETS.contains(&target) { X_FACE_TARGETS.start } else { Y_FACE_TARGETS.start };
        self.hweno_face_values(first, data)[target - first]
    }
}

/// Minimum-norm solution of `c γ = b` (three constraints).
fn min_norm_weights(c: &[[f64; N_CANDIDATES]; 3], b: &[f64; 3]) -> Option<[f64; N_CANDIDATES]> {
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (0..N_CANDIDATES).map(|n| c[i][n] * c[j][n]).sum();
        }
    }
    let lam = mat_vec(&invert(&g)?, b);
    Some(std::array::from_fn(|n| (0..3).map(|i| c[i][n] * lam[i]).sum()))
}

const MIRROR_X: [usize; 8] = [1, 0, 3, 2, 5, 4, 7, 6];
const MIRROR_Y: [usize; 8] = [2, 3, 0, 1, 6, 7, 4, 5];

fn mirror_target(t: usize, x: bool) -> usize {
    let pts = target_points();
    let (a, b) = pts[t];
    let want = if x { (-a, b) } else { (a, -b) };
    pts.iter().position(|p| (p.0 - want.0).abs() < 1e-15 && (p.1 - want.1).abs() < 1e-15).expect("symmetric target set")
}

fn check_weights(gamma: &[[f64; N_CANDIDATES]; N_TARGETS]) -> Result<(), KernelError> {
    for (t, g) in gamma.iter().enumerate() {
        if (g.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(KernelError::BadWeights { target: t, what: "unit sum" });
        }
        if g.iter().any(|v| *v <= 0.0) {
            return Err(KernelError::BadWeights { target: t, what: "positivity" });
        }
        for (x, perm) in [(true, MIRROR_X), (false, MIRROR_Y)] {
            let m = &gamma[mirror_target(t, x)];
            if (0..N_CANDIDATES).any(|n| (g[n] - m[perm[n]]).abs() > 1e-12) {
                return Err(KernelError::BadWeights { target: t, what: "mirror symmetry" });
            }
        }
    }
    let r3 = 3.0f64.sqrt();
    let printed = [
        (3533.0 + 351.0 * r3) / 37040.0,
        (5727.0 + 351.0 * r3) / 37040.0,
        (3533.0 - 351.0 * r3) / 37040.0,
        (5727.0 - 351.0 * r3) / 37040.0,
        (10599.0 - 1867.0 * r3) / 111120.0,
        (17181.0 - 415.0 * r3) / 111120.0,
        (10599.0 + 1867.0 * r3) / 111120.0,
        (17181.0 + 415.0 * r3) / 111120.0,
    ];
    if (0..N_CANDIDATES).any(|n| (gamma[3][n] - printed[n]).abs() > 1e-12) {
        return Err(KernelError::BadWeights { target: 3, what: "reference set at (1/2, √3/6)" });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel() -> Kernel2D<f64> {
        Kernel2D::new().unwrap()
    }

    fn combo(terms: &[(f64, i32, i32)]) -> [f64; STENCIL_LEN] {
        let mut d = [0.0; STENCIL_LEN];
        for &(c, a, b) in terms {
            let m = monomial_stencil(a, b);
            for k in 0..STENCIL_LEN {
                d[k] += c * m[k];
            }
        }
        d
    }

    #[test]
    fn constant_and_linear_reproduction() {
        let k = kernel();
        let c = combo(&[(2.0, 0, 0)]);
        for a in k.solve_candidates(&c) {
            assert!((a[0] - 2.0).abs() < 1e-13 && a[1..].iter().all(|v| v.abs() < 1e-12));
        }
        let lin = combo(&[(1.0, 1, 0), (2.0, 0, 1)]);
        for a in k.solve_candidates(&lin) {
            let expect = [0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0];
            for q in 0..8 {
                assert!((a[q] - expect[q]).abs() < 1e-12);
            }
        }
        for (t, g) in target_points().iter().enumerate() {
            for mode in [PointMode::Hweno, PointMode::Linear] {
                assert!((k.reconstruct_point(&c, t, mode) - 2.0).abs() < 1e-13);
                assert!((k.reconstruct_point(&lin, t, mode) - (g.0 + 2.0 * g.1)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn linear_mode_reproduces_mixed_cubics() {
        let k = kernel();
        for (a, b) in [(2, 1), (1, 2)] {
            let d = monomial_stencil(a, b);
            for (t, g) in target_points().iter().enumerate() {
                let exact = g.0.powi(a) * g.1.powi(b);
                assert!((k.linear_at(t, &d) - exact).abs() < 1e-12, "target {t}");
            }
            // defining conditions still hold for out-of-span data
            for n in 0..N_CANDIDATES {
                let coef = k.candidate(n, &d);
                for s in candidate_slots(n) {
                    let v: f64 = (0..8).map(|c| coef[c] * monomial_stencil(BASIS[c].0, BASIS[c].1)[s]).sum();
                    assert!((v - d[s]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn weights_examples() {
        let k = kernel();
        for t in INTERIOR_TARGETS {
            for g in k.linear_weights(t) {
                assert!((g - 0.125).abs() < 1e-12);
            }
        }
        let r3 = 3.0f64.sqrt();
        let g = k.linear_weights(3);
        assert!((g[0] - (3533.0 + 351.0 * r3) / 37040.0).abs() < 1e-12);
        assert!((g[7] - (17181.0 + 415.0 * r3) / 111120.0).abs() < 1e-12);
        for t in 0..N_TARGETS {
            let g = k.linear_weights(t);
            assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-13);
            assert!(g.iter().all(|v| *v > 0.0));
        }
        // the √3-odd parts cancel between the two Gauss points of a face
        let (a, b) = (k.linear_weights(2), k.linear_weights(3));
        for n in 0..N_CANDIDATES {
            let even = 0.5 * (a[n] + b[n]);
            assert!(even > 0.0 && (a[n] - even + b[n] - even).abs() < 1e-14);
        }
    }

    #[test]
    fn smoothness_examples() {
        assert_eq!(smoothness_2d(&[3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]), 0.0);
        assert!((smoothness_2d::<f64>(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((smoothness_2d::<f64>(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]) - 39.1125).abs() < 1e-12);
    }

    #[test]
    fn hweno_converges_to_linear_on_smooth_data() {
        let k = kernel();
        let mut diffs = Vec::new();
        for h in [0.2, 0.1, 0.05] {
            // cell averages of sin(x + 2y) on a grid of spacing h, in local coordinates
            let d = stencil_of(|x, y| (x + 2.0 * y + 0.3).sin(), h);
            let v = k.hweno_face_values(0, &d);
            let diff = (0..4).map(|q| (v[q] - k.linear_at(q, &d)).abs()).fold(0.0, f64::max);
            diffs.push(diff);
        }
        let order = (diffs[1] / diffs[2]).log2();
        assert!(order > 3.5, "observed order {order} from {diffs:?}");
    }

    fn stencil_of(f: impl Fn(f64, f64) -> f64, h: f64) -> [f64; STENCIL_LEN] {
        let (nodes, weights) = crate::quadrature::gauss5::<f64>();
        let mut d = [0.0; STENCIL_LEN];
        for k in 1..=9 {
            let (cx, cy) = label_offset(k);
            let (mut a, mut mx, mut my) = (0.0, 0.0, 0.0);
            for (xi, wx) in nodes.iter().zip(weights.iter()) {
                for (eta, wy) in nodes.iter().zip(weights.iter()) {
                    let u = f((cx as f64 + xi) * h, (cy as f64 + eta) * h);
                    a += wx * wy * u;
                    mx += wx * wy * xi * u;
                    my += wx * wy * eta * u;
                }
            }
            d[avg_slot(k)] = a;
            if let Some(s) = mom_x_slot(k) {
                d[s] = mx;
            }
            if let Some(s) = mom_y_slot(k) {
                d[s] = my;
            }
        }
        d
    }
}
