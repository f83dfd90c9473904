//! Conservation laws: fluxes, wave speeds, eigensystems and indicator variables.

use thiserror::Error;

use crate::scalar::{lit, to_f64, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum PhysicsError {
    #[error("inadmissible state: density {density:e}, pressure {pressure:e}")]
    Inadmissible { density: f64, pressure: f64 },
    #[error("non-finite state component")]
    NonFinite,
}

/// Left/right eigenvectors and eigenvalues of a flux Jacobian. `l` is stored
/// row-wise (rows are left eigenvectors), `r` column-wise in the usual matrix
/// sense: `r[row][col]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigensystem<T, const N: usize> {
    pub l: [[T; N]; N],
    pub r: [[T; N]; N],
    pub lambda: [T; N],
}

impl<T: Real, const N: usize> Eigensystem<T, N> {
    pub fn identity(lambda: T) -> Self {
        let mut l = [[T::zero(); N]; N];
        for (k, row) in l.iter_mut().enumerate() {
            row[k] = T::one();
        }
        Self { l, r: l, lambda: [lambda; N] }
    }

    /// `L · u`
    #[inline]
    pub fn project(&self, u: &[T; N]) -> [T; N] {
        let mut out = [T::zero(); N];
        for (o, row) in out.iter_mut().zip(self.l.iter()) {
            *o = row.iter().zip(u.iter()).map(|(a, b)| *a * *b).sum();
        }
        out
    }

    /// `R · w`
    #[inline]
    pub fn unproject(&self, w: &[T; N]) -> [T; N] {
        let mut out = [T::zero(); N];
        for (o, row) in out.iter_mut().zip(self.r.iter()) {
            *o = row.iter().zip(w.iter()).map(|(a, b)| *a * *b).sum();
        }
        out
    }
}

/// A hyperbolic conservation law with `N` conserved components.
pub trait ConservationLaw<T: Real, const N: usize>: Send + Sync {
    fn flux(&self, u: &[T; N], axis: Axis) -> [T; N];

    /// Upper bound on the spectral radius of the flux Jacobian.
    fn max_speed(&self, u: &[T; N], axis: Axis) -> T;

    /// Bound on the characteristic speed over every state between the
    /// componentwise extremes `lo` and `hi`. Laws whose speed peaks between
    /// sampled states override this; zero adds nothing to the per-state bound.
    fn range_speed(&self, _lo: &[T; N], _hi: &[T; N], _axis: Axis) -> T {
        T::zero()
    }

    fn eigensystem(&self, u: &[T; N], axis: Axis) -> Result<Eigensystem<T, N>, PhysicsError>;

    /// Components examined by the troubled-cell indicator.
    fn indicator_components(&self) -> &'static [usize];

    /// Transport velocity that decides which faces are inflow faces.
    fn indicator_velocity(&self, u: &[T; N], axis: Axis) -> T;

    fn check_admissible(&self, u: &[T; N]) -> Result<(), PhysicsError>;

    /// Momentum component normal to a wall perpendicular to `axis`.
    fn normal_momentum(&self, axis: Axis) -> Option<usize>;

    /// Whether interface reconstruction should run in characteristic variables.
    fn is_system(&self) -> bool {
        N > 1
    }

    /// `(ρ, p)` for gas-dynamics laws.
    fn density_pressure(&self, _u: &[T; N]) -> Option<(T, T)> {
        None
    }
}

/// Scalar laws of the form `u_t + f(u)_x (+ f(u)_y) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarLaw {
    /// `f(u) = u²/2`
    Burgers,
    /// `f(u) = 4u² / (4u² + (1 − u)²)`
    BuckleyLeverett,
}

impl ScalarLaw {
    pub fn f<T: Real>(&self, u: T) -> T {
        match self {
            ScalarLaw::Burgers => lit::<T>(0.5) * u * u,
            ScalarLaw::BuckleyLeverett => {
                let a = lit::<T>(4.0) * u * u;
                let b = (T::one() - u) * (T::one() - u);
                a / (a + b)
            }
        }
    }

    pub fn df<T: Real>(&self, u: T) -> T {
        match self {
            ScalarLaw::Burgers => u,
            ScalarLaw::BuckleyLeverett => {
                let d = lit::<T>(5.0) * u * u - lit::<T>(2.0) * u + T::one();
                lit::<T>(8.0) * u * (T::one() - u) / (d * d)
            }
        }
    }

    /// `max |f'(u)|` for `u ∈ [lo, hi]`.
    pub fn max_df_on<T: Real>(&self, lo: T, hi: T) -> T {
        let mut m = self.df(lo).abs().max(self.df(hi).abs());
        if let ScalarLaw::BuckleyLeverett = self {
            // f'' vanishes where 10u³ − 15u² + 1 = 0, one root in each bracket
            for (a, b) in [(-1.0, 0.0), (0.0, 1.0), (1.0, 2.0)] {
                let u = lit::<T>(bisect(|u| 10.0 * u * u * u - 15.0 * u * u + 1.0, a, b));
                if u > lo && u < hi {
                    m = m.max(self.df(u).abs());
                }
            }
        }
        m
    }
}

fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ga = g(a);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if (g(m) > 0.0) == (ga > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

impl<T: Real> ConservationLaw<T, 1> for ScalarLaw {
    #[inline]
    fn flux(&self, u: &[T; 1], _axis: Axis) -> [T; 1] {
        [self.f(u[0])]
    }

    #[inline]
    fn max_speed(&self, u: &[T; 1], _axis: Axis) -> T {
        self.df(u[0]).abs()
    }

    fn range_speed(&self, lo: &[T; 1], hi: &[T; 1], _axis: Axis) -> T {
        self.max_df_on(lo[0], hi[0])
    }

    fn eigensystem(&self, u: &[T; 1], _axis: Axis) -> Result<Eigensystem<T, 1>, PhysicsError> {
        Ok(Eigensystem::identity(self.df(u[0])))
    }

    fn indicator_components(&self) -> &'static [usize] {
        &[0]
    }

    #[inline]
    fn indicator_velocity(&self, u: &[T; 1], _axis: Axis) -> T {
        self.df(u[0])
    }

    fn check_admissible(&self, u: &[T; 1]) -> Result<(), PhysicsError> {
        if u[0].is_finite() {
            Ok(())
        } else {
            Err(PhysicsError::NonFinite)
        }
    }

    fn normal_momentum(&self, _axis: Axis) -> Option<usize> {
        None
    }
}

/// Ideal-gas Euler equations in one dimension, state `(ρ, ρμ, E)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Euler1D<T> {
    pub gamma: T,
}

/// Ideal-gas Euler equations in two dimensions, state `(ρ, ρμ, ρν, E)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Euler2D<T> {
    pub gamma: T,
}

impl<T: Real> Default for Euler1D<T> {
    fn default() -> Self {
        Self { gamma: lit(1.4) }
    }
}

impl<T: Real> Default for Euler2D<T> {
    fn default() -> Self {
        Self { gamma: lit(1.4) }
    }
}

fn inadmissible<T: Real>(rho: T, p: T) -> PhysicsError {
    PhysicsError::Inadmissible { density: to_f64(rho), pressure: to_f64(p) }
}

impl<T: Real> Euler1D<T> {
    #[inline]
    pub fn pressure(&self, u: &[T; 3]) -> T {
        (self.gamma - T::one()) * (u[2] - lit::<T>(0.5) * u[1] * u[1] / u[0])
    }

    /// `(ρ, μ, p)` from `(ρ, ρμ, E)`.
    pub fn primitive(&self, u: &[T; 3]) -> Result<[T; 3], PhysicsError> {
        self.check_admissible(u)?;
        Ok([u[0], u[1] / u[0], self.pressure(u)])
    }

    /// `(ρ, ρμ, E)` from `(ρ, μ, p)`.
    pub fn conservative(&self, w: &[T; 3]) -> Result<[T; 3], PhysicsError> {
        if !(w[0] > T::zero()) || !(w[2] > T::zero()) {
            return Err(inadmissible(w[0], w[2]));
        }
        let e = w[2] / (self.gamma - T::one()) + lit::<T>(0.5) * w[0] * w[1] * w[1];
        Ok([w[0], w[0] * w[1], e])
    }

    pub fn sound_speed(&self, u: &[T; 3]) -> T {
        (self.gamma * self.pressure(u) / u[0]).abs().sqrt()
    }
}

impl<T: Real> ConservationLaw<T, 3> for Euler1D<T> {
    #[inline]
    fn flux(&self, u: &[T; 3], _axis: Axis) -> [T; 3] {
        let vel = u[1] / u[0];
        let p = self.pressure(u);
        [u[1], u[1] * vel + p, vel * (u[2] + p)]
    }

    #[inline]
    fn max_speed(&self, u: &[T; 3], _axis: Axis) -> T {
        (u[1] / u[0]).abs() + self.sound_speed(u)
    }

    fn eigensystem(&self, u: &[T; 3], _axis: Axis) -> Result<Eigensystem<T, 3>, PhysicsError> {
        self.check_admissible(u)?;
        let g = self.gamma;
        let one = T::one();
        let half = lit::<T>(0.5);
        let vel = u[1] / u[0];
        let p = self.pressure(u);
        let c = (g * p / u[0]).sqrt();
        let h = (u[2] + p) / u[0];
        let b1 = (g - one) / (c * c);
        let b2 = b1 * vel * vel * half;
        let r = [
            [one, one, one],
            [vel - c, vel, vel + c],
            [h - vel * c, half * vel * vel, h + vel * c],
        ];
        let l = [
            [half * (b2 + vel / c), -half * (b1 * vel + one / c), half * b1],
            [one - b2, b1 * vel, -b1],
            [half * (b2 - vel / c), -half * (b1 * vel - one / c), half * b1],
        ];
        Ok(Eigensystem { l, r, lambda: [vel - c, vel, vel + c] })
    }

    fn indicator_components(&self) -> &'static [usize] {
        &[0, 2]
    }

    #[inline]
    fn indicator_velocity(&self, u: &[T; 3], _axis: Axis) -> T {
        u[1] / u[0]
    }

    fn check_admissible(&self, u: &[T; 3]) -> Result<(), PhysicsError> {
        if !u.iter().all(|v| v.is_finite()) {
            return Err(PhysicsError::NonFinite);
        }
        let p = self.pressure(u);
        if u[0] > T::zero() && p > T::zero() {
            Ok(())
        } else {
            Err(inadmissible(u[0], p))
        }
    }

    fn normal_momentum(&self, _axis: Axis) -> Option<usize> {
        Some(1)
    }

    fn density_pressure(&self, u: &[T; 3]) -> Option<(T, T)> {
        Some((u[0], self.pressure(u)))
    }
}

impl<T: Real> Euler2D<T> {
    #[inline]
    pub fn pressure(&self, u: &[T; 4]) -> T {
        (self.gamma - T::one()) * (u[3] - lit::<T>(0.5) * (u[1] * u[1] + u[2] * u[2]) / u[0])
    }

    /// `(ρ, μ, ν, p)` from `(ρ, ρμ, ρν, E)`.
    pub fn primitive(&self, u: &[T; 4]) -> Result<[T; 4], PhysicsError> {
        self.check_admissible(u)?;
        Ok([u[0], u[1] / u[0], u[2] / u[0], self.pressure(u)])
    }

    /// `(ρ, ρμ, ρν, E)` from `(ρ, μ, ν, p)`.
    pub fn conservative(&self, w: &[T; 4]) -> Result<[T; 4], PhysicsError> {
        if !(w[0] > T::zero()) || !(w[3] > T::zero()) {
            return Err(inadmissible(w[0], w[3]));
        }
        let e = w[3] / (self.gamma - T::one()) + lit::<T>(0.5) * w[0] * (w[1] * w[1] + w[2] * w[2]);
        Ok([w[0], w[0] * w[1], w[0] * w[2], e])
    }

    pub fn sound_speed(&self, u: &[T; 4]) -> T {
        (self.gamma * self.pressure(u) / u[0]).abs().sqrt()
    }
}

impl<T: Real> ConservationLaw<T, 4> for Euler2D<T> {
    #[inline]
    fn flux(&self, u: &[T; 4], axis: Axis) -> [T; 4] {
        let p = self.pressure(u);
        match axis {
            Axis::X => {
                let vel = u[1] / u[0];
                [u[1], u[1] * vel + p, u[2] * vel, vel * (u[3] + p)]
            }
            Axis::Y => {
                let vel = u[2] / u[0];
                [u[2], u[1] * vel, u[2] * vel + p, vel * (u[3] + p)]
            }
        }
    }

    #[inline]
    fn max_speed(&self, u: &[T; 4], axis: Axis) -> T {
        let k = if axis == Axis::X { 1 } else { 2 };
        (u[k] / u[0]).abs() + self.sound_speed(u)
    }

    fn eigensystem(&self, u: &[T; 4], axis: Axis) -> Result<Eigensystem<T, 4>, PhysicsError> {
        self.check_admissible(u)?;
        let g = self.gamma;
        let one = T::one();
        let zero = T::zero();
        let half = lit::<T>(0.5);
        let p = self.pressure(u);
        let c = (g * p / u[0]).sqrt();
        let h = (u[3] + p) / u[0];
        // (n, t): normal and tangential momentum slots
        let (n, t) = if axis == Axis::X { (1, 2) } else { (2, 1) };
        let un = u[n] / u[0];
        let ut = u[t] / u[0];
        let q2 = half * (un * un + ut * ut);
        let b1 = (g - one) / (c * c);
        let b2 = b1 * q2;

        let mut r = [[zero; 4]; 4];
        let cols = [
            [one, un - c, ut, h - un * c],
            [one, un, ut, q2],
            [zero, zero, one, ut],
            [one, un + c, ut, h + un * c],
        ];
        for (k, col) in cols.iter().enumerate() {
            // col entries are in (ρ, normal, tangential, E) order
            r[0][k] = col[0];
            r[n][k] = col[1];
            r[t][k] = col[2];
            r[3][k] = col[3];
        }
        let rows = [
            [half * (b2 + un / c), -half * (b1 * un + one / c), -half * b1 * ut, half * b1],
            [one - b2, b1 * un, b1 * ut, -b1],
            [-ut, zero, one, zero],
            [half * (b2 - un / c), -half * (b1 * un - one / c), -half * b1 * ut, half * b1],
        ];
        let mut l = [[zero; 4]; 4];
        for (k, row) in rows.iter().enumerate() {
            l[k][0] = row[0];
            l[k][n] = row[1];
            l[k][t] = row[2];
            l[k][3] = row[3];
        }
        Ok(Eigensystem { l, r, lambda: [un - c, un, un, un + c] })
    }

    fn indicator_components(&self) -> &'static [usize] {
        &[0, 3]
    }

    #[inline]
    fn indicator_velocity(&self, u: &[T; 4], axis: Axis) -> T {
        match axis {
            Axis::X => u[1] / u[0],
            Axis::Y => u[2] / u[0],
        }
    }

    fn check_admissible(&self, u: &[T; 4]) -> Result<(), PhysicsError> {
        if !u.iter().all(|v| v.is_finite()) {
            return Err(PhysicsError::NonFinite);
        }
        let p = self.pressure(u);
        if u[0] > T::zero() && p > T::zero() {
            Ok(())
        } else {
            Err(inadmissible(u[0], p))
        }
    }

    fn normal_momentum(&self, axis: Axis) -> Option<usize> {
        Some(if axis == Axis::X { 1 } else { 2 })
    }

    fn density_pressure(&self, u: &[T; 4]) -> Option<(T, T)> {
        Some((u[0], self.pressure(u)))
    }
}

/// Flux of `u` along `axis`, after checking admissibility.
pub fn evaluate_flux<T: Real, P: ConservationLaw<T, N>, const N: usize>(
    model: &P,
    u: &[T; N],
    axis: Axis,
) -> Result<[T; N], PhysicsError> {
    model.check_admissible(u)?;
    Ok(model.flux(u, axis))
}

/// Largest wave speed along `axis` over a set of cell averages.
pub fn max_wave_speed<'a, T, P, I, const N: usize>(model: &P, states: I, axis: Axis) -> Result<T, (usize, PhysicsError)>
where
    T: Real,
    P: ConservationLaw<T, N>,
    I: IntoIterator<Item = &'a [T; N]>,
{
    let mut alpha = T::zero();
    for (k, u) in states.into_iter().enumerate() {
        model.check_admissible(u).map_err(|e| (k, e))?;
        alpha = alpha.max(model.max_speed(u, axis));
    }
    Ok(alpha)
}
