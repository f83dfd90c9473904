//! Gauss–Legendre nodes from the eigenvalues of the Jacobi matrix.

use nalgebra::DMatrix;

/// `n`-point rule on [−½, ½]; weights sum to one.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = j.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v = eig.eigenvectors[(0, k)];
            (0.5 * eig.eigenvalues[k], v * v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// ∫_{−½}^{½} g over the unit interval, exact for polynomials of degree < 2n.
pub fn integrate(n: usize, g: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(n);
    x.iter().zip(&w).map(|(xi, wi)| wi * g(*xi)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_monomials() {
        for a in 0..10 {
            let exact = if a % 2 == 1 { 0.0 } else { 2.0 * 0.5f64.powi(a + 1) / (a + 1) as f64 };
            assert!((integrate(5, |x| x.powi(a)) - exact).abs() < 1e-15);
        }
    }
}
