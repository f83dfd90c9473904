//! Fixed quadrature rules on the reference interval [-1/2, 1/2].

use crate::scalar::{lit, Real};

/// Five-point Gauss-Legendre rule (exact to degree 9).
pub fn gauss5<T: Real>() -> ([T; 5], [T; 5]) {
    let a = (5.0f64 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let b = (5.0f64 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let wa = (322.0 + 13.0 * 70.0f64.sqrt()) / 900.0;
    let wb = (322.0 - 13.0 * 70.0f64.sqrt()) / 900.0;
    let nodes = [-b / 2.0, -a / 2.0, 0.0, a / 2.0, b / 2.0];
    let weights = [wb / 2.0, wa / 2.0, 128.0 / 450.0, wa / 2.0, wb / 2.0];
    (nodes.map(lit), weights.map(lit))
}

/// Two-point Gauss-Legendre rule: nodes ±√3/6, weights 1/2.
pub fn gauss2<T: Real>() -> ([T; 2], [T; 2]) {
    let s = 3.0f64.sqrt() / 6.0;
    ([lit(-s), lit(s)], [lit(0.5), lit(0.5)])
}

/// Four-point Gauss-Lobatto rule: nodes ±1/2, ±√5/10; weights 1/12, 5/12.
pub fn lobatto4<T: Real>() -> ([T; 4], [T; 4]) {
    let s = 5.0f64.sqrt() / 10.0;
    (
        [lit(-0.5), lit(-s), lit(s), lit(0.5)],
        [lit(1.0 / 12.0), lit(5.0 / 12.0), lit(5.0 / 12.0), lit(1.0 / 12.0)],
    )
}
