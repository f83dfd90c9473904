//! Two-dimensional candidate polynomials and linear weights.
//!
//! Cells of the 3×3 block carry labels 1..9 row by row from the lower left;
//! the data vector is `ū_1..ū_9, v̄_4, v̄_5, v̄_6, w̄_2, w̄_5, w̄_8`.

use nalgebra::{DMatrix, DVector};

use crate::quad::integrate;

/// Incomplete cubic basis: ξ^a η^b.
pub const MONOMIALS: [(i32, i32); 8] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (0, 3)];
/// Every monomial of total degree ≤ 3.
pub const CUBICS: [(i32, i32); 10] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];

#[derive(Clone, Copy, Debug)]
pub enum Datum2 {
    Avg(usize),
    MomX(usize),
    MomY(usize),
}

fn centre(label: usize) -> (f64, f64) {
    let k = label - 1;
    ((k % 3) as f64 - 1.0, (k / 3) as f64 - 1.0)
}

impl Datum2 {
    pub fn slot(self) -> usize {
        match self {
            Datum2::Avg(k) => k - 1,
            Datum2::MomX(4) => 9,
            Datum2::MomX(5) => 10,
            Datum2::MomX(6) => 11,
            Datum2::MomY(2) => 12,
            Datum2::MomY(5) => 13,
            Datum2::MomY(8) => 14,
            other => panic!("{other:?} is not part of the stencil"),
        }
    }

    fn on_monomial(self, a: i32, b: i32) -> f64 {
        let (k, wx, wy) = match self {
            Datum2::Avg(k) => (k, 0, 0),
            Datum2::MomX(k) => (k, 1, 0),
            Datum2::MomY(k) => (k, 0, 1),
        };
        let (cx, cy) = centre(k);
        integrate(6, |s| (cx + s).powi(a) * s.powi(wx)) * integrate(6, |s| (cy + s).powi(b) * s.powi(wy))
    }
}

/// Eight data per candidate.
pub fn stencils() -> [[Datum2; 8]; 8] {
    use Datum2::*;
    [
        [Avg(1), Avg(2), Avg(4), Avg(5), MomX(4), MomX(5), MomY(2), MomY(5)],
        [Avg(2), Avg(3), Avg(5), Avg(6), MomX(5), MomX(6), MomY(2), MomY(5)],
        [Avg(4), Avg(5), Avg(7), Avg(8), MomX(4), MomX(5), MomY(5), MomY(8)],
        [Avg(5), Avg(6), Avg(8), Avg(9), MomX(5), MomX(6), MomY(5), MomY(8)],
        [Avg(1), Avg(2), Avg(3), Avg(4), Avg(5), Avg(7), MomX(5), MomY(5)],
        [Avg(1), Avg(2), Avg(3), Avg(5), Avg(6), Avg(9), MomX(5), MomY(5)],
        [Avg(1), Avg(4), Avg(5), Avg(7), Avg(8), Avg(9), MomX(5), MomY(5)],
        [Avg(3), Avg(5), Avg(6), Avg(7), Avg(8), Avg(9), MomX(5), MomY(5)],
    ]
}

pub fn targets() -> [(f64, f64); 12] {
    let s = 3f64.sqrt() / 6.0;
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

/// Stencil vector of the polynomial ξ^a η^b.
pub fn data_of_monomial(a: i32, b: i32) -> [f64; 15] {
    let mut d = [0.0; 15];
    for k in 1..=9 {
        d[Datum2::Avg(k).slot()] = Datum2::Avg(k).on_monomial(a, b);
    }
    for k in [4, 5, 6] {
        d[Datum2::MomX(k).slot()] = Datum2::MomX(k).on_monomial(a, b);
    }
    for k in [2, 5, 8] {
        d[Datum2::MomY(k).slot()] = Datum2::MomY(k).on_monomial(a, b);
    }
    d
}

/// Map from the 15-entry data vector to the eight coefficients of candidate `n`.
pub fn candidate_matrix(n: usize) -> DMatrix<f64> {
    let st = stencils()[n];
    let a = DMatrix::from_fn(8, 8, |r, c| st[r].on_monomial(MONOMIALS[c].0, MONOMIALS[c].1));
    let lu = a.lu();
    let mut out = DMatrix::zeros(8, 15);
    for (r, d) in st.iter().enumerate() {
        let mut e = DVector::zeros(8);
        e[r] = 1.0;
        let col = lu.solve(&e).expect("nonsingular candidate system");
        for c in 0..8 {
            out[(c, d.slot())] += col[c];
        }
    }
    out
}

fn basis_row(x: f64, y: f64) -> DVector<f64> {
    DVector::from_iterator(8, MONOMIALS.iter().map(|&(a, b)| x.powi(a) * y.powi(b)))
}

#[derive(Clone, Debug)]
pub struct Derived2D {
    pub gamma: Vec<[f64; 8]>,
    /// Σ_n γ_n p_n(G) as a row on the data vector, per target.
    pub linear: Vec<[f64; 15]>,
    /// Candidate `n` value at target `t`, as a row: `values[t][n]`.
    pub values: Vec<Vec<[f64; 15]>>,
    /// Worst violation of "exact for every cubic" over targets.
    pub cubic_residual: f64,
}

/// Minimum-norm weights with Σγ_n p_n(G) = q(G) for every cubic q, via the
/// pseudo-inverse of the (rank-deficient) 10×8 constraint matrix.
pub fn derive_2d_weights() -> Derived2D {
    let mats: Vec<DMatrix<f64>> = (0..8).map(candidate_matrix).collect();
    let cubic_data: Vec<DVector<f64>> =
        CUBICS.iter().map(|&(a, b)| DVector::from_column_slice(&data_of_monomial(a, b))).collect();
    let mut gamma = Vec::new();
    let mut linear = Vec::new();
    let mut values = Vec::new();
    let mut worst = 0.0f64;
    for &(x, y) in targets().iter() {
        let b = basis_row(x, y);
        let c = DMatrix::from_fn(10, 8, |q, n| (b.transpose() * &mats[n] * &cubic_data[q])[(0, 0)]);
        let rhs = DVector::from_iterator(10, CUBICS.iter().map(|&(a, bb)| x.powi(a) * y.powi(bb)));
        let g = c.clone().pseudo_inverse(1e-12).expect("pseudo-inverse") * &rhs;
        worst = worst.max((c * &g - rhs).amax());
        let rows: Vec<[f64; 15]> = (0..8)
            .map(|n| {
                let r = b.transpose() * &mats[n];
                std::array::from_fn(|s| r[(0, s)])
            })
            .collect();
        let mut lin = [0.0; 15];
        for n in 0..8 {
            for s in 0..15 {
                lin[s] += g[n] * rows[n][s];
            }
        }
        gamma.push(std::array::from_fn(|n| g[n]));
        linear.push(lin);
        values.push(rows);
    }
    Derived2D { gamma, linear, values, cubic_residual: worst }
}

/// Σ over derivative orders 1..3 and each distinct mixed partial of
/// ∫∫ (∂p)² on the unit cell, as an 8×8 form on [`MONOMIALS`] coefficients.
pub fn smoothness_form() -> DMatrix<f64> {
    let deriv = |(a, b): (i32, i32), (dx, dy): (i32, i32), x: f64, y: f64| -> f64 {
        if a < dx || b < dy {
            return 0.0;
        }
        let fa: f64 = (0..dx).map(|m| (a - m) as f64).product();
        let fb: f64 = (0..dy).map(|m| (b - m) as f64).product();
        fa * fb * x.powi(a - dx) * y.powi(b - dy)
    };
    let mut q = DMatrix::zeros(8, 8);
    for l in 1..=3 {
        for dx in 0..=l {
            let d = (dx, l - dx);
            for i in 0..8 {
                for j in 0..8 {
                    q[(i, j)] += integrate(4, |x| {
                        integrate(4, |y| deriv(MONOMIALS[i], d, x, y) * deriv(MONOMIALS[j], d, x, y))
                    });
                }
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_weights_are_uniform_and_sets_sum_to_one() {
        let d = derive_2d_weights();
        assert!(d.cubic_residual < 1e-12);
        for t in 8..12 {
            for n in 0..8 {
                assert!((d.gamma[t][n] - 0.125).abs() < 1e-12);
            }
        }
        for g in &d.gamma {
            assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
