//! Reference computations for testing the production kernels.
//!
//! Nothing here shares code with `hweno-core`: every polynomial is built by
//! solving its defining linear system with `nalgebra`, integrals come from
//! a Gauss–Legendre rule generated by Golub–Welsch, and the scheme in
//! [`tiny`] is a direct, unoptimized transcription of the update.

pub mod derive1d;
pub mod derive2d;
pub mod gas;
pub mod quad;
pub mod tiny;

/// Largest absolute entrywise difference.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
