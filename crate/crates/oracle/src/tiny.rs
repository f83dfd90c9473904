//! Direct evaluation of the 1D semi-discrete operator for Burgers' equation
//! on a small periodic grid.

use nalgebra::{DMatrix, DVector};

use crate::derive1d::{derive_1d_constants, dot, quad_form};

#[derive(Clone, Debug)]
pub struct TinyRhs {
    /// Moments after limiting (equal to the input when nothing is limited).
    pub moments: Vec<f64>,
    pub traces: Vec<[f64; 4]>,
    pub d_avg: Vec<f64>,
    pub d_mom: Vec<f64>,
}

/// Weights of the four-point Lobatto rule on [−½, ½], solved from
/// exactness on 1, ξ, ξ², ξ³.
pub fn lobatto_weights() -> ([f64; 4], [f64; 4]) {
    let s = 5f64.sqrt() / 10.0;
    let nodes = [-0.5, -s, s, 0.5];
    let a = DMatrix::from_fn(4, 4, |r, c| nodes[c].powi(r as i32));
    let b = DVector::from_fn(4, |r, _| if r % 2 == 1 { 0.0 } else { 0.5f64.powi(r as i32) / (r + 1) as f64 });
    let w = a.lu().solve(&b).expect("Lobatto system");
    (nodes, [w[0], w[1], w[2], w[3]])
}

fn weighted(gamma: &[f64; 3], beta: &[f64; 3], eps: f64, vals: &[f64; 3]) -> f64 {
    let raw: Vec<f64> = (0..3).map(|n| gamma[n] / (beta[n] + eps).powi(2)).collect();
    let sum: f64 = raw.iter().sum();
    (0..3).map(|n| raw[n] / sum * vals[n]).sum()
}

/// `limit` replaces every moment by its limited value; `nonlinear` takes
/// every interface value from the weighted cubics instead of the quintic.
pub fn burgers_rhs(avg: &[f64], mom: &[f64], dx: f64, limit: bool, nonlinear: bool, eps: f64) -> TinyRhs {
    let n = avg.len();
    let c = derive_1d_constants();
    let at = |v: &[f64], i: isize| v[i.rem_euclid(n as isize) as usize];
    let stencil = |u: &[f64], v: &[f64], i: usize| -> [f64; 6] {
        let i = i as isize;
        [at(u, i - 1), at(u, i), at(u, i + 1), at(v, i - 1), at(v, i), at(v, i + 1)]
    };

    let mut moments = mom.to_vec();
    if limit {
        for (i, m) in moments.iter_mut().enumerate() {
            let d = stencil(avg, mom, i);
            let q = c.moment_candidates.map(|r| dot(&r, &d));
            let b = [0, 1, 2].map(|k| quad_form(&c.moment_beta[k], &d));
            *m = weighted(&c.moment_gamma, &b, eps, &q);
        }
    }

    let mut traces = Vec::with_capacity(n);
    for i in 0..n {
        let d = stencil(avg, &moments, i);
        let (left, right) = if nonlinear {
            let b = [0, 1, 2].map(|k| quad_form(&c.interface_beta[k], &d));
            let pr = c.interface_candidates.map(|r| dot(&r, &d));
            let pl = c.interface_candidates_left.map(|r| dot(&r, &d));
            (weighted(&c.interface_gamma_left, &b, eps, &pl), weighted(&c.interface_gamma, &b, eps, &pr))
        } else {
            (dot(&c.interface_left, &d), dot(&c.interface_right, &d))
        };
        traces.push([left, dot(&c.internal[0], &d), dot(&c.internal[1], &d), right]);
    }

    let f = |u: f64| 0.5 * u * u;
    let alpha = avg.iter().fold(0.0f64, |m, u| m.max(u.abs()));
    // flux[i] sits at x_{i+1/2}
    let flux: Vec<f64> = (0..n)
        .map(|i| {
            let ul = traces[i][3];
            let ur = traces[(i + 1) % n][0];
            0.5 * (f(ul) + f(ur)) - 0.5 * alpha * (ur - ul)
        })
        .collect();
    let (_, w) = lobatto_weights();
    let mut d_avg = vec![0.0; n];
    let mut d_mom = vec![0.0; n];
    for i in 0..n {
        let fr = flux[i];
        let fl = flux[(i + n - 1) % n];
        let volume: f64 = (0..4).map(|q| w[q] * f(traces[i][q])).sum();
        d_avg[i] = -(fr - fl) / dx;
        d_mom[i] = -(fr + fl) / (2.0 * dx) + volume / dx;
    }
    TinyRhs { moments, traces, d_avg, d_mom }
}
