//! One-dimensional reconstruction constants from their defining conditions.
//!
//! Data vectors are ordered `(ū_{i−1}, ū_i, ū_{i+1}, v̄_{i−1}, v̄_i, v̄_{i+1})`
//! where v̄ is the cell mean of `u·(x − x_k)/Δx`. The local coordinate is
//! ξ = (x − x_i)/Δx.

use nalgebra::{DMatrix, DVector};

use crate::quad::integrate;

/// A linear condition on polynomial coefficients.
#[derive(Clone, Copy, Debug)]
pub enum Datum {
    /// mean over the cell centred at `c`
    Avg(i32),
    /// mean of `(ξ − c)·p` over the cell centred at `c`
    Mom(i32),
}

impl Datum {
    fn slot(self) -> usize {
        match self {
            Datum::Avg(c) => (c + 1) as usize,
            Datum::Mom(c) => (c + 4) as usize,
        }
    }

    /// Value of the condition applied to ξ^a.
    fn on_monomial(self, a: i32) -> f64 {
        match self {
            Datum::Avg(c) => {
                let c = c as f64;
                integrate(6, |s| (c + s).powi(a))
            }
            Datum::Mom(c) => {
                let c = c as f64;
                integrate(6, |s| (c + s).powi(a) * s)
            }
        }
    }
}

/// A polynomial of degree `data.len() − 1` matching `data`, as a map from
/// the six-entry data vector to monomial coefficients.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub coeffs: DMatrix<f64>,
}

impl Candidate {
    pub fn new(data: &[Datum]) -> Self {
        let k = data.len();
        let a = DMatrix::from_fn(k, k, |r, c| data[r].on_monomial(c as i32));
        let inv = a.try_inverse().expect("candidate system must be nonsingular");
        let mut coeffs = DMatrix::zeros(k, 6);
        for (r, d) in data.iter().enumerate() {
            for c in 0..k {
                coeffs[(c, d.slot())] += inv[(c, r)];
            }
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.nrows() - 1
    }

    /// Row acting on data that returns the `l`-th derivative at ξ.
    pub fn derivative_row(&self, l: usize, xi: f64) -> [f64; 6] {
        let mut out = [0.0; 6];
        for a in l..=self.degree() {
            let mut f = 1.0;
            for m in 0..l {
                f *= (a - m) as f64;
            }
            let basis = f * xi.powi((a - l) as i32);
            for s in 0..6 {
                out[s] += basis * self.coeffs[(a, s)];
            }
        }
        out
    }

    pub fn value_row(&self, xi: f64) -> [f64; 6] {
        self.derivative_row(0, xi)
    }

    /// Row returning the first moment over the target cell.
    pub fn moment_row(&self) -> [f64; 6] {
        let mut out = [0.0; 6];
        for a in 0..=self.degree() {
            let m = integrate(6, |s| s.powi(a as i32) * s);
            for s in 0..6 {
                out[s] += m * self.coeffs[(a, s)];
            }
        }
        out
    }

    /// Σ_{l=1}^{r} ∫ (p^{(l)})² over the target cell, as a 6×6 quadratic form.
    pub fn smoothness_form(&self, r: usize) -> DMatrix<f64> {
        let mut q = DMatrix::zeros(6, 6);
        for l in 1..=r {
            for i in 0..6 {
                for j in 0..6 {
                    q[(i, j)] += integrate(6, |x| self.derivative_row(l, x)[i] * self.derivative_row(l, x)[j]);
                }
            }
        }
        q
    }
}

/// Weights `γ` with Σγ_n·row_n = target, by least squares; also returns the
/// residual norm, which is zero when the combination is exact.
pub fn combination_weights(rows: &[[f64; 6]], target: &[f64; 6]) -> (Vec<f64>, f64) {
    let a = DMatrix::from_fn(6, rows.len(), |r, c| rows[c][r]);
    let b = DVector::from_column_slice(target);
    let svd = a.clone().svd(true, true);
    let g = svd.solve(&b, 1e-14).expect("svd solve");
    let res = (a * &g - b).norm();
    (g.iter().copied().collect(), res)
}

/// All one-dimensional constants, each as a row acting on the data vector.
#[derive(Clone, Debug)]
pub struct Derived1D {
    pub moment_candidates: [[f64; 6]; 3],
    pub moment_linear: [f64; 6],
    pub moment_gamma: [f64; 3],
    pub moment_gamma_residual: f64,
    pub moment_beta: [DMatrix<f64>; 3],
    /// Candidate values at ξ = ½.
    pub interface_candidates: [[f64; 6]; 3],
    /// Candidate values at ξ = −½.
    pub interface_candidates_left: [[f64; 6]; 3],
    pub interface_right: [f64; 6],
    pub interface_left: [f64; 6],
    pub interface_gamma: [f64; 3],
    pub interface_gamma_left: [f64; 3],
    pub interface_gamma_residual: f64,
    pub interface_beta: [DMatrix<f64>; 3],
    /// Quintic values at ξ = −√5/10 and √5/10.
    pub internal: [[f64; 6]; 2],
}

pub fn limiter_stencils() -> [Candidate; 4] {
    use Datum::*;
    [
        Candidate::new(&[Avg(-1), Avg(0), Mom(-1)]),
        Candidate::new(&[Avg(-1), Avg(0), Avg(1)]),
        Candidate::new(&[Avg(0), Avg(1), Mom(1)]),
        Candidate::new(&[Avg(-1), Avg(0), Avg(1), Mom(-1), Mom(1)]),
    ]
}

pub fn interface_stencils() -> [Candidate; 4] {
    use Datum::*;
    [
        Candidate::new(&[Avg(-1), Avg(0), Mom(-1), Mom(0)]),
        Candidate::new(&[Avg(-1), Avg(0), Avg(1), Mom(0)]),
        Candidate::new(&[Avg(0), Avg(1), Mom(0), Mom(1)]),
        Candidate::new(&[Avg(-1), Avg(0), Avg(1), Mom(-1), Mom(0), Mom(1)]),
    ]
}

pub fn derive_1d_constants() -> Derived1D {
    let lim = limiter_stencils();
    let moment_candidates = [lim[0].moment_row(), lim[1].moment_row(), lim[2].moment_row()];
    let moment_linear = lim[3].moment_row();
    let (g, moment_gamma_residual) = combination_weights(&moment_candidates, &moment_linear);

    let itf = interface_stencils();
    let right: [[f64; 6]; 3] = std::array::from_fn(|n| itf[n].value_row(0.5));
    let left: [[f64; 6]; 3] = std::array::from_fn(|n| itf[n].value_row(-0.5));
    let interface_right = itf[3].value_row(0.5);
    let interface_left = itf[3].value_row(-0.5);
    let (gr, rr) = combination_weights(&right, &interface_right);
    let (gl, rl) = combination_weights(&left, &interface_left);
    let s = 5f64.sqrt() / 10.0;

    Derived1D {
        moment_candidates,
        moment_linear,
        moment_gamma: [g[0], g[1], g[2]],
        moment_gamma_residual,
        moment_beta: std::array::from_fn(|n| lim[n].smoothness_form(2)),
        interface_candidates: right,
        interface_candidates_left: left,
        interface_right,
        interface_left,
        interface_gamma: [gr[0], gr[1], gr[2]],
        interface_gamma_left: [gl[0], gl[1], gl[2]],
        interface_gamma_residual: rr.max(rl),
        interface_beta: std::array::from_fn(|n| itf[n].smoothness_form(3)),
        internal: [itf[3].value_row(-s), itf[3].value_row(s)],
    }
}

/// `dᵀ Q d`
pub fn quad_form(q: &DMatrix<f64>, d: &[f64; 6]) -> f64 {
    let v = DVector::from_column_slice(d);
    (v.transpose() * q * &v)[(0, 0)]
}

pub fn dot(row: &[f64; 6], d: &[f64; 6]) -> f64 {
    row.iter().zip(d).map(|(a, b)| a * b).sum()
}
