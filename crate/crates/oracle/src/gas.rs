//! Ideal-gas relations checked independently of the solver.

use nalgebra::{Complex, DMatrix, DVector};

/// Conserved `(ρ, ρu, ρv, E)` from primitive `(ρ, u, v, p)`.
pub fn conserved(gamma: f64, w: [f64; 4]) -> [f64; 4] {
    let [r, u, v, p] = w;
    [r, r * u, r * v, p / (gamma - 1.0) + 0.5 * r * (u * u + v * v)]
}

/// Flux along the unit normal `n`.
pub fn normal_flux(gamma: f64, q: [f64; 4], n: (f64, f64)) -> [f64; 4] {
    let r = q[0];
    let (u, v) = (q[1] / r, q[2] / r);
    let p = (gamma - 1.0) * (q[3] - 0.5 * r * (u * u + v * v));
    let un = u * n.0 + v * n.1;
    [r * un, q[1] * un + p * n.0, q[2] * un + p * n.1, (q[3] + p) * un]
}

/// Largest violation of `s [q] = [F·n]` across a shock moving with normal speed `s`.
pub fn rankine_hugoniot_residual(gamma: f64, pre: [f64; 4], post: [f64; 4], s: f64, n: (f64, f64)) -> f64 {
    let fa = normal_flux(gamma, pre, n);
    let fb = normal_flux(gamma, post, n);
    (0..4).map(|k| (s * (post[k] - pre[k]) - (fb[k] - fa[k])).abs()).fold(0.0, f64::max)
}

/// Flux Jacobian along `n` by complex-step differentiation, exact to rounding.
pub fn jacobian(gamma: f64, q: [f64; 4], n: (f64, f64)) -> DMatrix<f64> {
    const H: f64 = 1e-30;
    let mut j = DMatrix::zeros(4, 4);
    for c in 0..4 {
        let mut z = q.map(|x| Complex::new(x, 0.0));
        z[c].im = H;
        let f = complex_flux(gamma, z, n);
        for r in 0..4 {
            j[(r, c)] = f[r].im / H;
        }
    }
    j
}

fn complex_flux(gamma: f64, q: [Complex<f64>; 4], n: (f64, f64)) -> [Complex<f64>; 4] {
    let r = q[0];
    let (u, v) = (q[1] / r, q[2] / r);
    let p = (q[3] - r * (u * u + v * v) * 0.5) * (gamma - 1.0);
    let un = u * n.0 + v * n.1;
    [r * un, q[1] * un + p * n.0, q[2] * un + p * n.1, (q[3] + p) * un]
}

/// Sorted real eigenvalues of the flux Jacobian.
pub fn wave_speeds(gamma: f64, q: [f64; 4], n: (f64, f64)) -> Vec<f64> {
    let ev: DVector<nalgebra::Complex<f64>> = jacobian(gamma, q, n).complex_eigenvalues();
    let mut v: Vec<f64> = ev.iter().map(|c| c.re).collect();
    v.sort_by(f64::total_cmp);
    v
}
