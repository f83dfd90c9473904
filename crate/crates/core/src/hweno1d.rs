//! One-dimensional HWENO kernels on the three-cell stencil {i−1, i, i+1}.
//!
//! All coefficients are closed forms in the local coordinate
//! ξ = (x − x_i)/Δx; the kernels are scalar and know nothing about physics.

use crate::scalar::{lit, Real};

/// Default ε in the nonlinear weights.
pub const EPSILON: f64 = 1e-6;

/// Averages and first moments of one scalar field on the three-cell stencil.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Stencil1D<T> {
    pub um: T,
    pub u0: T,
    pub up: T,
    pub vm: T,
    pub v0: T,
    pub vp: T,
}

impl<T: Real> Stencil1D<T> {
    pub fn new(u: [T; 3], v: [T; 3]) -> Self {
        Self { um: u[0], u0: u[1], up: u[2], vm: v[0], v0: v[1], vp: v[2] }
    }

    /// The stencil seen through x → −x.
    #[inline]
    pub fn mirrored(&self) -> Self {
        Self { um: self.up, u0: self.u0, up: self.um, vm: -self.vp, v0: -self.v0, vp: -self.vm }
    }
}

/// Which end of the cell an interface value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// u⁺ at x_{i−1/2}
    Left,
    /// u⁻ at x_{i+1/2}
    Right,
}

/// ω_n = γ_n/(β_n+ε)², normalized.
#[inline]
pub fn nonlinear_weights<T: Real, const K: usize>(gamma: &[T; K], beta: &[T; K], eps: T) -> [T; K] {
    let mut w = [T::zero(); K];
    let mut sum = T::zero();
    for k in 0..K {
        let d = beta[k] + eps;
        w[k] = gamma[k] / (d * d);
        sum += w[k];
    }
    for v in w.iter_mut() {
        *v /= sum;
    }
    w
}

pub fn moment_linear_weights<T: Real>() -> [T; 3] {
    [lit(11.0 / 38.0), lit(8.0 / 19.0), lit(11.0 / 38.0)]
}

pub fn interface_linear_weights<T: Real>() -> [T; 3] {
    [lit(25.0 / 189.0), lit(22.0 / 63.0), lit(14.0 / 27.0)]
}

/// First-moment values of the three quadratic candidates.
#[inline]
pub fn moment_candidates<T: Real>(s: &Stencil1D<T>) -> [T; 3] {
    let sixth = lit::<T>(1.0 / 6.0);
    [
        sixth * (s.u0 - s.um) - s.vm,
        (s.up - s.um) / lit::<T>(24.0),
        sixth * (s.up - s.u0) - s.vp,
    ]
}

/// Smoothness of the quadratic candidates (first and second derivatives).
#[inline]
pub fn moment_smoothness<T: Real>(s: &Stencil1D<T>) -> [T; 3] {
    let four = lit::<T>(4.0);
    let c13_3 = lit::<T>(13.0 / 3.0);
    let six = lit::<T>(6.0);
    let twelve = lit::<T>(12.0);
    let a1 = s.um - s.u0 + six * s.vm;
    let b1 = s.um - s.u0 + twelve * s.vm;
    let a2 = s.um - s.up;
    let b2 = s.um - lit::<T>(2.0) * s.u0 + s.up;
    let a3 = s.u0 - s.up + six * s.vp;
    let b3 = s.u0 - s.up + twelve * s.vp;
    [
        four * a1 * a1 + c13_3 * b1 * b1,
        lit::<T>(0.25) * a2 * a2 + lit::<T>(13.0 / 12.0) * b2 * b2,
        four * a3 * a3 + c13_3 * b3 * b3,
    ]
}

/// First moment of the fourth-degree polynomial matching all six data.
#[inline]
pub fn moment_linear<T: Real>(s: &Stencil1D<T>) -> T {
    lit::<T>(5.0 / 76.0) * (s.up - s.um) - lit::<T>(11.0 / 38.0) * (s.vm + s.vp)
}

/// Replacement first moment for a troubled cell.
#[inline]
pub fn limit_first_moment<T: Real>(s: &Stencil1D<T>, eps: T) -> T {
    let q = moment_candidates(s);
    let w = nonlinear_weights(&moment_linear_weights(), &moment_smoothness(s), eps);
    w[0] * q[0] + w[1] * q[1] + w[2] * q[2]
}

/// Values at x_{i+1/2} of the three cubic candidates and of the quintic
/// built from the whole stencil, in that order.
#[inline]
pub fn interface_candidates<T: Real>(s: &Stencil1D<T>) -> [T; 4] {
    let p1 = lit::<T>(0.75) * s.um + lit::<T>(0.25) * s.u0 + lit::<T>(3.5) * s.vm + lit::<T>(11.5) * s.v0;
    let p2 = lit::<T>(2.0 / 33.0) * s.um + lit::<T>(5.0 / 6.0) * s.u0 + lit::<T>(7.0 / 66.0) * s.up
        + lit::<T>(60.0 / 11.0) * s.v0;
    let p3 = lit::<T>(0.5) * (s.u0 + s.up) + lit::<T>(2.0) * (s.v0 - s.vp);
    [p1, p2, p3, linear_right(s)]
}

/// Smoothness of the cubic candidates (first through third derivatives).
#[inline]
pub fn interface_smoothness<T: Real>(s: &Stencil1D<T>) -> [T; 3] {
    let six = lit::<T>(6.0);
    let a1 = s.um - s.u0 + six * s.vm + lit::<T>(54.0) * s.v0;
    let b1 = lit::<T>(15.0) * (s.um - s.u0) + lit::<T>(66.0) * s.vm + lit::<T>(114.0) * s.v0;
    let c1 = s.um - s.u0 + six * (s.vm + s.v0);
    let a2 = s.um - s.up - lit::<T>(240.0) * s.v0;
    let b2 = s.um - lit::<T>(2.0) * s.u0 + s.up;
    let c2 = s.um - s.up + lit::<T>(24.0) * s.v0;
    let a3 = s.u0 - s.up + lit::<T>(54.0) * s.v0 + six * s.vp;
    let b3 = lit::<T>(15.0) * (s.u0 - s.up) + lit::<T>(114.0) * s.v0 + lit::<T>(66.0) * s.vp;
    let c3 = s.u0 - s.up + six * (s.v0 + s.vp);
    let k1 = lit::<T>(1.0 / 16.0);
    let k2 = lit::<T>(13.0 / 48.0);
    let k3 = lit::<T>(3905.0 / 16.0);
    [
        k1 * a1 * a1 + k2 * b1 * b1 + k3 * c1 * c1,
        lit::<T>(1.0 / 484.0) * a2 * a2 + lit::<T>(13.0 / 12.0) * b2 * b2 + lit::<T>(355.0 / 44.0) * c2 * c2,
        k1 * a3 * a3 + k2 * b3 * b3 + k3 * c3 * c3,
    ]
}

#[inline]
fn hweno_right<T: Real>(s: &Stencil1D<T>, eps: T) -> T {
    let p = interface_candidates(s);
    let w = nonlinear_weights(&interface_linear_weights(), &interface_smoothness(s), eps);
    w[0] * p[0] + w[1] * p[1] + w[2] * p[2]
}

/// Nonlinear interface value: u⁻_{i+1/2} for `Side::Right`, u⁺_{i−1/2} for
/// `Side::Left` (the right kernel applied to the mirrored stencil).
#[inline]
pub fn hweno_interface<T: Real>(s: &Stencil1D<T>, side: Side, eps: T) -> T {
    match side {
        Side::Right => hweno_right(s, eps),
        Side::Left => hweno_right(&s.mirrored(), eps),
    }
}

#[inline]
fn linear_right<T: Real>(s: &Stencil1D<T>) -> T {
    lit::<T>(13.0 / 108.0) * s.um + lit::<T>(7.0 / 12.0) * s.u0 + lit::<T>(8.0 / 27.0) * s.up
        + lit::<T>(25.0 / 54.0) * s.vm
        + lit::<T>(241.0 / 54.0) * s.v0
        - lit::<T>(28.0 / 27.0) * s.vp
}

/// Quintic interface values `(u⁺_{i−1/2}, u⁻_{i+1/2})`.
#[inline]
pub fn linear_interface<T: Real>(s: &Stencil1D<T>) -> (T, T) {
    let left = lit::<T>(8.0 / 27.0) * s.um + lit::<T>(7.0 / 12.0) * s.u0 + lit::<T>(13.0 / 108.0) * s.up
        + lit::<T>(28.0 / 27.0) * s.vm
        - lit::<T>(241.0 / 54.0) * s.v0
        - lit::<T>(25.0 / 54.0) * s.vp;
    (left, linear_right(s))
}

/// Quintic values at the interior Gauss–Lobatto points ξ = ∓√5/10.
#[inline]
pub fn linear_internal<T: Real>(s: &Stencil1D<T>) -> (T, T) {
    let r5 = lit::<T>(5.0f64.sqrt());
    let a = lit::<T>(101.0 / 5400.0) * r5;
    let b = lit::<T>(841.0 / 13500.0) * r5;
    let c = lit::<T>(10289.0 / 6750.0) * r5;
    let k24 = lit::<T>(1.0 / 24.0);
    let k20 = lit::<T>(3.0 / 20.0);
    let mid = lit::<T>(13.0 / 12.0) * s.u0;
    let minus = -(a + k24) * s.um + mid + (a - k24) * s.up - (k20 + b) * s.vm - c * s.v0 + (k20 - b) * s.vp;
    let plus = (a - k24) * s.um + mid - (a + k24) * s.up + (b - k20) * s.vm + c * s.v0 + (k20 + b) * s.vp;
    (minus, plus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(u: [f64; 3], v: [f64; 3]) -> Stencil1D<f64> {
        Stencil1D::new(u, v)
    }

    const EPS: f64 = EPSILON;

    #[test]
    fn constant_data() {
        let s = st([2.5; 3], [0.0; 3]);
        assert_eq!(limit_first_moment(&s, EPS), 0.0);
        assert!((hweno_interface(&s, Side::Right, EPS) - 2.5).abs() < 1e-14);
        assert!((hweno_interface(&s, Side::Left, EPS) - 2.5).abs() < 1e-14);
        let (l, r) = linear_interface(&s);
        assert!((l - 2.5).abs() < 1e-14 && (r - 2.5).abs() < 1e-14);
        let (a, b) = linear_internal(&s);
        assert!((a - 2.5).abs() < 1e-14 && (b - 2.5).abs() < 1e-14);
    }

    #[test]
    fn linear_data() {
        let s = st([-1.0, 0.0, 1.0], [1.0 / 12.0; 3]);
        for q in moment_candidates(&s) {
            assert!((q - 1.0 / 12.0).abs() < 1e-15);
        }
        assert!((limit_first_moment(&s, EPS) - 1.0 / 12.0).abs() < 1e-15);
        assert!((hweno_interface(&s, Side::Right, EPS) - 0.5).abs() < 1e-13);
        assert!((hweno_interface(&s, Side::Left, EPS) + 0.5).abs() < 1e-13);
        let (l, r) = linear_interface(&s);
        assert!((l + 0.5).abs() < 1e-14 && (r - 0.5).abs() < 1e-14);
        let (a, b) = linear_internal(&s);
        let g = 5.0f64.sqrt() / 10.0;
        assert!((a + g).abs() < 1e-14 && (b - g).abs() < 1e-14);
    }

    #[test]
    fn moment_limiter_hand_example() {
        let s = st([0.0, 1.0, 2.0], [0.0; 3]);
        let q = moment_candidates(&s);
        assert!((q[0] - 1.0 / 6.0).abs() < 1e-15 && (q[1] - 1.0 / 12.0).abs() < 1e-15 && (q[2] - 1.0 / 6.0).abs() < 1e-15);
        let b = moment_smoothness(&s);
        assert!((b[0] - (4.0 + 13.0 / 3.0)).abs() < 1e-14);
        assert!((b[1] - 1.0).abs() < 1e-14);
        assert!((b[2] - (4.0 + 13.0 / 3.0)).abs() < 1e-14);
        let g = [11.0 / 38.0, 8.0 / 19.0, 11.0 / 38.0];
        let raw: Vec<f64> = (0..3).map(|k| g[k] / (b[k] + EPS).powi(2)).collect();
        let sum: f64 = raw.iter().sum();
        let expect: f64 = (0..3).map(|k| raw[k] / sum * q[k]).sum();
        assert!((limit_first_moment(&s, EPS) - expect).abs() < 1e-15);
    }

    #[test]
    fn linear_weights_sum_to_one() {
        let a: f64 = moment_linear_weights::<f64>().iter().sum();
        let b: f64 = interface_linear_weights::<f64>().iter().sum();
        assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_smoothness_reduces_to_linear_combination() {
        // combining candidates with the linear weights reproduces the high-order value
        let s = st([0.3, -1.2, 0.7], [0.05, -0.4, 0.11]);
        let p = interface_candidates(&s);
        let g = interface_linear_weights::<f64>();
        let lin = g[0] * p[0] + g[1] * p[1] + g[2] * p[2];
        assert!((lin - p[3]).abs() < 1e-13);
        let q = moment_candidates(&s);
        let gm = moment_linear_weights::<f64>();
        let linm = gm[0] * q[0] + gm[1] * q[1] + gm[2] * q[2];
        assert!((linm - moment_linear(&s)).abs() < 1e-14);
    }

    #[test]
    fn left_equals_right_on_mirror() {
        let s = st([0.3, -1.2, 0.7], [0.05, -0.4, 0.11]);
        let l = hweno_interface(&s, Side::Left, EPS);
        let r = hweno_interface(&s.mirrored(), Side::Right, EPS);
        assert_eq!(l, r);
        let (ll, _) = linear_interface(&s);
        let (_, rr) = linear_interface(&s.mirrored());
        assert!((ll - rr).abs() < 1e-14);
        let (a, b) = linear_internal(&s);
        let (c, d) = linear_internal(&s.mirrored());
        assert!((a - d).abs() < 1e-14 && (b - c).abs() < 1e-14);
    }

    #[test]
    fn nonlinear_weights_are_convex() {
        let w = nonlinear_weights(&[0.2, 0.3, 0.5], &[1e3, 0.0, 1e-20], 1e-6);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(w.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn single_precision_kernels() {
        let s = Stencil1D::<f32>::new([-1.0, 0.0, 1.0], [1.0 / 12.0; 3]);
        assert!((hweno_interface(&s, Side::Right, 1e-6) - 0.5).abs() < 1e-5);
    }
}
