//! Flat unitary connections on degree-zero line bundles and their holonomy.
//!
//! The bundle `φ(z̲₀)` is the trivial smooth line bundle with Dolbeault
//! operator `∂̄ − (π z₀/τ) dz̄`. Adding `(π z̄₀/τ) dz` gives the flat
//! connection with form
//!
//! ```text
//! A = (π/τ)(z̄₀ dz − z₀ dz̄)
//! ```
//!
//! Flat sections along a path `γ` solve `s′ = −A(γ′) s`. Around the closed
//! loop `t ↦ t̲` this gives the holonomy `exp(2πi·Im z₀/τ)`, and the sign of
//! that holonomy at a `σ`-fixed class is the obstruction `(σ*η̄)∘η = ±Id` to
//! a real structure.

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::picard::{FixedClassKind, LineBundleClass, PicardError};
use crate::scalar::Scalar;
use crate::torus::KleinBottle;

/// Default step count for the integrator.
pub const DEFAULT_STEPS: usize = 10_000;

/// Agreement tolerance between integrated and closed-form holonomy.
pub const HOLONOMY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolonomyError {
    #[error("connection parameter z0 must be finite")]
    NonFiniteParameter,
    #[error("modulus tau must be a finite positive number")]
    InvalidModulus,
    #[error("path needs at least one integration step")]
    ZeroSteps,
    #[error("class is not fixed by the real structure; no obstruction sign is defined")]
    NotFixed,
    #[error("holonomy {re} + {im}i is not within 0.5 of +1 or -1")]
    IndeterminateSign { re: f64, im: f64 },
    #[error(transparent)]
    Picard(#[from] PicardError),
}

/// `D_{z₀}` on `φ(z̲₀)` over `Y_τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatConnection<F> {
    z0: Complex<F>,
    tau: F,
}

impl<F: Float + FloatConst> FlatConnection<F> {
    pub fn new(z0: Complex<F>, tau: F) -> Result<Self, HolonomyError> {
        if !(z0.re.is_finite() && z0.im.is_finite()) {
            return Err(HolonomyError::NonFiniteParameter);
        }
        if !(tau.is_finite() && tau > F::zero()) {
            return Err(HolonomyError::InvalidModulus);
        }
        Ok(Self { z0, tau })
    }

    pub fn z0(&self) -> Complex<F> {
        self.z0
    }

    pub fn tau(&self) -> F {
        self.tau
    }

    /// `A(v) = (π/τ)(z̄₀ v − z₀ v̄)` for a tangent vector `v ∈ ℂ`.
    pub fn form(&self, v: Complex<F>) -> Complex<F> {
        let scale = F::PI() / self.tau;
        (self.z0.conj() * v - self.z0 * v.conj()) * scale
    }

    /// Closed-form holonomy around the loop `t ↦ t̲`: `exp(2πi·Im z₀/τ)`.
    pub fn holonomy_unit_loop(&self) -> Complex<F> {
        let two = F::one() + F::one();
        let theta = two * F::PI() * self.z0.im / self.tau;
        Complex::from_polar(F::one(), theta)
    }
}

/// Shape of a path in `ℂ`, read modulo the lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum PathKind<F> {
    /// `t ↦ t̲`, `t ∈ [0, 1]`; closed.
    UnitLoop,
    /// `t ↦ base + t`, `t ∈ [0, 1/2]`.
    HalfSegment { base: Complex<F> },
    /// Straight segments through the waypoints.
    PolyLine(Vec<Complex<F>>),
}

/// A path plus the number of integration steps per straight segment.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec<F> {
    pub kind: PathKind<F>,
    pub steps: usize,
}

impl<F: Float> PathSpec<F> {
    pub fn unit_loop(steps: usize) -> Self {
        Self {
            kind: PathKind::UnitLoop,
            steps,
        }
    }

    pub fn half_segment(base: Complex<F>, steps: usize) -> Self {
        Self {
            kind: PathKind::HalfSegment { base },
            steps,
        }
    }

    pub fn poly_line(points: Vec<Complex<F>>, steps: usize) -> Self {
        Self {
            kind: PathKind::PolyLine(points),
            steps,
        }
    }

    fn segments(&self) -> Vec<(Complex<F>, Complex<F>)> {
        let half = F::one() / (F::one() + F::one());
        match &self.kind {
            PathKind::UnitLoop => vec![(Complex::new(F::zero(), F::zero()), Complex::new(F::one(), F::zero()))],
            PathKind::HalfSegment { base } => vec![(*base, *base + Complex::new(half, F::zero()))],
            PathKind::PolyLine(points) => points.windows(2).map(|w| (w[0], w[1])).collect(),
        }
    }
}

/// Time-stepping scheme for the transport ODE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Integrator {
    /// `s ← exp(h·λ(t + h/2))·s`: midpoint quadrature of the connection
    /// form, exponentiated per step. Unitary for unitary connections.
    #[default]
    ExponentialMidpoint,
    /// Explicit midpoint (second-order Runge–Kutta) on `s′ = λ(t)·s`.
    ExplicitMidpoint,
}

/// Parallel transport factor `s(1)/s(0)` along `path` with the default
/// integrator. For closed paths this is the holonomy.
pub fn parallel_transport<F: Float + FloatConst>(
    conn: &FlatConnection<F>,
    path: &PathSpec<F>,
) -> Result<Complex<F>, HolonomyError> {
    parallel_transport_with(conn, path, Integrator::default())
}

pub fn parallel_transport_with<F: Float + FloatConst>(
    conn: &FlatConnection<F>,
    path: &PathSpec<F>,
    integrator: Integrator,
) -> Result<Complex<F>, HolonomyError> {
    if path.steps == 0 {
        return Err(HolonomyError::ZeroSteps);
    }
    let one = Complex::new(F::one(), F::zero());
    let n = F::from(path.steps).expect("step count fits in a float");
    let half = F::one() / (F::one() + F::one());
    let mut s = one;
    for (start, end) in path.segments() {
        let velocity = end - start;
        if velocity.norm() == F::zero() {
            continue;
        }
        // straight segment parametrised on [0, 1]; λ(t) = −A(γ′(t))
        let rate = |_t: F| -conn.form(velocity);
        let h = F::one() / n;
        for k in 0..path.steps {
            let t = F::from(k).expect("step index fits in a float") * h;
            s = match integrator {
                Integrator::ExponentialMidpoint => s * (rate(t + half * h) * h).exp(),
                Integrator::ExplicitMidpoint => {
                    let k1 = rate(t) * s;
                    let mid = s + k1 * (half * h);
                    s + rate(t + half * h) * mid * h
                }
            };
        }
    }
    Ok(s)
}

/// Closed-form holonomy of `D_{z₀}` around `t ↦ t̲`.
pub fn holonomy_unit_loop<F: Float + FloatConst>(conn: &FlatConnection<F>) -> Complex<F> {
    conn.holonomy_unit_loop()
}

/// `±1`, the scalar in `(σ*η̄)∘η = ±Id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `+1` for `Re > 0.5`, `−1` for `Re < −0.5`, error in between.
    pub fn from_holonomy(h: Complex<f64>) -> Result<Self, HolonomyError> {
        if h.re > 0.5 {
            Ok(Sign::Plus)
        } else if h.re < -0.5 {
            Ok(Sign::Minus)
        } else {
            Err(HolonomyError::IndeterminateSign { re: h.re, im: h.im })
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Connection on the degree-zero untwist of a `σ`-fixed class.
fn fixed_class_connection<S: Scalar>(
    l: &LineBundleClass<S>,
    x: &KleinBottle,
) -> Result<FlatConnection<f64>, HolonomyError> {
    if l.classify_fixed()? == FixedClassKind::NotFixed {
        return Err(HolonomyError::NotFixed);
    }
    let untwisted = l.untwist_even()?;
    let (re, im) = untwisted.point().to_complex(x);
    FlatConnection::new(Complex::new(re, im), x.tau())
}

/// Realness obstruction of a `σ_d`-fixed class, read off the closed-form
/// loop holonomy of its flat connection. `+1` iff the class is the
/// complexification of a real line bundle.
pub fn realness_sign<S: Scalar>(l: &LineBundleClass<S>, x: &KleinBottle) -> Result<Sign, HolonomyError> {
    let conn = fixed_class_connection(l, x)?;
    Sign::from_holonomy(conn.holonomy_unit_loop())
}

/// `(σ*η̄)∘η` for a `σ_d`-fixed class, obtained by integrating the
/// transport ODE over the two half-segments `γ` and `γ_{1/2}∘γ`.
pub fn integrated_composition<S: Scalar>(
    l: &LineBundleClass<S>,
    x: &KleinBottle,
    steps: usize,
) -> Result<Complex<f64>, HolonomyError> {
    let conn = fixed_class_connection(l, x)?;
    let zero = Complex::new(0.0, 0.0);
    let eta = parallel_transport(&conn, &PathSpec::half_segment(zero, steps))?;
    let eta_conj = parallel_transport(&conn, &PathSpec::half_segment(Complex::new(0.5, 0.0), steps))?;
    Ok(eta * eta_conj)
}

/// As [`realness_sign`], from [`integrated_composition`].
pub fn realness_sign_integrated<S: Scalar>(
    l: &LineBundleClass<S>,
    x: &KleinBottle,
    steps: usize,
) -> Result<Sign, HolonomyError> {
    Sign::from_holonomy(integrated_composition(l, x, steps)?)
}

/// `(σ*η̄′)∘η′` for `η′ = c·η`, given the scalar `(σ*η̄)∘η`: `c·c̄` times it.
pub fn rescaled_composition(composition: Complex<f64>, c: Complex<f64>) -> Complex<f64> {
    composition * c.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::torus::TorusPoint;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    /// Oracle: the line integral `∫₀¹ A(γ′) dt` along `γ(t) = t`, evaluated
    /// by hand (`A(1) = (π/τ)(z̄₀ − z₀)`), then exponentiated.
    fn line_integral_oracle(z0: Complex<f64>, tau: f64) -> Complex<f64> {
        let a = std::f64::consts::PI / tau * (z0.conj() - z0);
        (-a).exp()
    }

    #[test]
    fn empty_polyline_is_identity() {
        let conn = FlatConnection::new(c(0.3, 0.7), 2.0).unwrap();
        for pts in [vec![], vec![c(0.1, 0.2)], vec![c(0.4, 0.4), c(0.4, 0.4)]] {
            let t = parallel_transport(&conn, &PathSpec::poly_line(pts, 100)).unwrap();
            assert_eq!(t, c(1.0, 0.0));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            FlatConnection::new(c(f64::NAN, 0.0), 1.0),
            Err(HolonomyError::NonFiniteParameter)
        );
        assert_eq!(FlatConnection::new(c(0.0, 0.0), 0.0), Err(HolonomyError::InvalidModulus));
        let conn = FlatConnection::new(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(
            parallel_transport(&conn, &PathSpec::unit_loop(0)),
            Err(HolonomyError::ZeroSteps)
        );
    }

    #[test]
    fn closed_form_examples() {
        let tau = 1.7;
        let real = FlatConnection::new(c(0.3, 0.0), tau).unwrap();
        assert!((real.holonomy_unit_loop() - c(1.0, 0.0)).norm() < 1e-15);
        let half = FlatConnection::new(c(0.8, tau / 2.0), tau).unwrap();
        assert!((half.holonomy_unit_loop() - c(-1.0, 0.0)).norm() < 1e-15);
        let quarter = FlatConnection::new(c(0.0, tau / 4.0), tau).unwrap();
        assert!((quarter.holonomy_unit_loop() - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn closed_form_matches_line_integral_oracle() {
        for &tau in &[0.5, 1.0, 2.0, 3.3] {
            for i in 0..10 {
                for j in 0..10 {
                    let z0 = c(i as f64 / 10.0, j as f64 * tau / 10.0);
                    let conn = FlatConnection::new(z0, tau).unwrap();
                    let diff = conn.holonomy_unit_loop() - line_integral_oracle(z0, tau);
                    assert!(diff.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn integrated_unit_loop_matches_closed_form() {
        let tau = 2.0;
        for z0 in [c(0.3, 0.0), c(0.0, tau / 2.0), c(0.25, tau / 4.0), c(0.9, 1.9)] {
            let conn = FlatConnection::new(z0, tau).unwrap();
            let ode = parallel_transport(&conn, &PathSpec::unit_loop(DEFAULT_STEPS)).unwrap();
            assert!((ode - conn.holonomy_unit_loop()).norm() < HOLONOMY_TOL, "z0={z0}");
            assert!((ode.norm() - 1.0).abs() < HOLONOMY_TOL);
        }
        let conn = FlatConnection::new(c(0.3, 0.0), tau).unwrap();
        let ode = parallel_transport(&conn, &PathSpec::unit_loop(DEFAULT_STEPS)).unwrap();
        assert!((ode - c(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn half_segments_compose_to_loop() {
        let tau = 1.3;
        for z0 in [c(0.1, 0.2), c(0.0, tau / 2.0), c(0.6, 1.0)] {
            let conn = FlatConnection::new(z0, tau).unwrap();
            let first = parallel_transport(&conn, &PathSpec::half_segment(c(0.0, 0.0), 5_000)).unwrap();
            let second = parallel_transport(&conn, &PathSpec::half_segment(c(0.5, 0.0), 5_000)).unwrap();
            let whole = parallel_transport(&conn, &PathSpec::unit_loop(10_000)).unwrap();
            assert!((first * second - whole).norm() < 1e-12);
        }
    }

    #[test]
    fn explicit_midpoint_converges_at_second_order() {
        let conn = FlatConnection::new(c(0.2, 0.25), 1.0).unwrap();
        let exact = conn.holonomy_unit_loop();
        let err = |n: usize| {
            let h = parallel_transport_with(&conn, &PathSpec::unit_loop(n), Integrator::ExplicitMidpoint).unwrap();
            (h - exact).norm()
        };
        let errors: Vec<f64> = [1000, 2000, 4000].iter().map(|&n| err(n)).collect();
        for w in errors.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}, errors {errors:?}");
        }
    }

    #[test]
    fn holonomy_is_multiplicative_in_z0() {
        let tau = 0.8;
        let z = c(0.2, 0.11);
        let w = c(0.45, 0.6);
        let h = |z0| FlatConnection::new(z0, tau).unwrap().holonomy_unit_loop();
        assert!((h(z + w) - h(z) * h(w)).norm() < 1e-14);
    }

    #[test]
    fn realness_sign_examples() {
        let x = KleinBottle::standard(1.5).unwrap();
        let real = LineBundleClass::new(0, TorusPoint::exact((7, 10), (0, 1)));
        let obstructed = LineBundleClass::new(0, TorusPoint::exact((7, 10), (1, 2)));
        assert_eq!(realness_sign(&real, &x), Ok(Sign::Plus));
        assert_eq!(realness_sign(&obstructed, &x), Ok(Sign::Minus));
        assert_eq!(realness_sign_integrated(&real, &x, 2_000), Ok(Sign::Plus));
        assert_eq!(realness_sign_integrated(&obstructed, &x, 2_000), Ok(Sign::Minus));

        let moving = LineBundleClass::new(0, TorusPoint::exact((7, 10), (1, 3)));
        assert_eq!(realness_sign(&moving, &x), Err(HolonomyError::NotFixed));
        let odd = LineBundleClass::<Rational>::new(1, TorusPoint::origin());
        assert_eq!(realness_sign(&odd, &x), Err(HolonomyError::NotFixed));

        // even degree classes are untwisted by the real reference first
        let deg4 = LineBundleClass::<Rational>::real_reference(2)
            .tensor(&LineBundleClass::new(0, TorusPoint::exact((1, 5), (1, 2))));
        assert_eq!(realness_sign(&deg4, &x), Ok(Sign::Minus));
    }

    #[test]
    fn rescaling_the_isomorphism_keeps_the_sign() {
        for cc in [c(2.0, 0.0), c(0.1, -3.0), c(-1.0, 1.0)] {
            let r = rescaled_composition(c(-1.0, 0.0), cc);
            assert_eq!(Sign::from_holonomy(r / r.norm()), Ok(Sign::Minus));
            assert!((r + c(cc.norm_sqr(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn single_precision_loop() {
        let conn = FlatConnection::new(Complex::new(0.1f32, 0.5f32), 1.0f32).unwrap();
        let h = parallel_transport(&conn, &PathSpec::unit_loop(1_000)).unwrap();
        assert!((h - Complex::new(-1.0f32, 0.0)).norm() < 1e-4);
    }
}
