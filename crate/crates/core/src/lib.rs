//! Hybrid Hermite-WENO finite-volume schemes on uniform 1D and 2D grids.
//!
//! Everything is generic over the floating-point type; the aliases below
//! fix it to `f64`.

pub mod field;
pub mod hweno1d;
pub mod hweno2d;
pub mod indicator;
mod linalg;
pub mod mesh;
pub mod physics;
pub mod problems;
pub mod quadrature;
pub mod rhs;
pub mod scalar;
pub mod timeloop;

pub use rhs::SchemeMode;
pub use scalar::Real;

pub type Mesh1 = mesh::Mesh1D<f64>;
pub type Mesh2 = mesh::Mesh2D<f64>;
pub type ScalarField1 = field::MomentField1D<f64, 1>;
pub type EulerField1 = field::MomentField1D<f64, 3>;
pub type ScalarField2 = field::MomentField2D<f64, 1>;
pub type EulerField2 = field::MomentField2D<f64, 4>;
pub type ScalarScheme1 = rhs::Scheme1D<f64, physics::ScalarLaw, 1>;
pub type EulerScheme1 = rhs::Scheme1D<f64, physics::Euler1D<f64>, 3>;
pub type ScalarScheme2 = rhs::Scheme2D<f64, physics::ScalarLaw, 1>;
pub type EulerScheme2 = rhs::Scheme2D<f64, physics::Euler2D<f64>, 4>;
pub type Preset = problems::Preset<f64>;
pub type Kernel2 = hweno2d::Kernel2D<f64>;
