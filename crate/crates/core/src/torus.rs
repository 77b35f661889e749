//! The complex torus `Y_τ = ℂ / ⟨1, iτ⟩` and its real structure.
//!
//! A point is stored as `(a, b)` with `z = a + b·τ·i`, both coordinates
//! reduced into `[0, 1)`. Keeping `b` in units of `τ` makes the involution
//! and all torsion structure independent of the modulus; `τ` only matters to
//! the holonomy kernel.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Backing, Proximity, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error("modulus tau must be a finite positive number, got {0}")]
    InvalidModulus(f64),
    #[error("non-finite coordinate ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("operation requires the standard involution z -> conj(z) + 1/2; normalize the Klein bottle first")]
    NonStandardConvention,
}

/// Which anti-holomorphic involution of `Y_τ` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// `z ↦ z̄ + 1/2`
    SigmaStandard,
    /// `z ↦ −z̄ + iτ/2`
    SigmaPrime,
}

/// A Klein bottle presented as `(Y_τ, σ)` or `(Y_τ, σ′)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KleinBottle {
    tau: f64,
    convention: Convention,
}

/// Record of the isomorphism produced by [`KleinBottle::normal_form`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormalFormMap {
    Identity,
    /// `z ↦ i·z / τ`, taking `(Y_τ, σ′)` to `(Y_{1/τ}, σ)`.
    RotateAndScale { tau: f64 },
}

impl NormalFormMap {
    /// Apply the map to a point of `ℂ` given as `(re, im)`.
    pub fn apply(&self, re: f64, im: f64) -> (f64, f64) {
        match *self {
            NormalFormMap::Identity => (re, im),
            NormalFormMap::RotateAndScale { tau } => (-im / tau, re / tau),
        }
    }
}

impl KleinBottle {
    pub fn new(tau: f64, convention: Convention) -> Result<Self, TorusError> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(TorusError::InvalidModulus(tau));
        }
        Ok(Self { tau, convention })
    }

    /// `(Y_τ, σ)` with `σ(z) = z̄ + 1/2`.
    pub fn standard(tau: f64) -> Result<Self, TorusError> {
        Self::new(tau, Convention::SigmaStandard)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Errors unless this is the standard model.
    pub fn require_standard(&self) -> Result<(), TorusError> {
        match self.convention {
            Convention::SigmaStandard => Ok(()),
            Convention::SigmaPrime => Err(TorusError::NonStandardConvention),
        }
    }

    /// The isomorphic standard model together with the map realising it.
    ///
    /// `(Y_τ, σ′)` is carried to `(Y_{1/τ}, σ)` by `z ↦ iz/τ`; the standard
    /// model is returned unchanged. The output modulus is the unique
    /// isomorphism invariant of the Klein bottle.
    pub fn normal_form(&self) -> (KleinBottle, NormalFormMap) {
        match self.convention {
            Convention::SigmaStandard => (*self, NormalFormMap::Identity),
            Convention::SigmaPrime => (
                KleinBottle {
                    tau: 1.0 / self.tau,
                    convention: Convention::SigmaStandard,
                },
                NormalFormMap::RotateAndScale { tau: self.tau },
            ),
        }
    }

    /// Apply this Klein bottle's involution to a point of `ℂ` given as
    /// `(re, im)`, without reducing modulo the lattice.
    pub fn involution_lift(&self, re: f64, im: f64) -> (f64, f64) {
        match self.convention {
            Convention::SigmaStandard => (re + 0.5, -im),
            Convention::SigmaPrime => (-re, im + self.tau / 2.0),
        }
    }

    /// True if `(re₁, im₁) − (re₂, im₂)` lies in `⟨1, iτ⟩` up to `tol`.
    pub fn lattice_equivalent(&self, p: (f64, f64), q: (f64, f64), tol: f64) -> bool {
        let da = p.0 - q.0;
        let db = (p.1 - q.1) / self.tau;
        (da - da.round()).abs() <= tol && (db - db.round()).abs() <= tol
    }
}

/// A point of `ℂ/Λ` in canonical coordinates `(a, b) ∈ [0, 1)²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint<S> {
    a: S,
    b: S,
}

impl<S: Scalar> TorusPoint<S> {
    /// Reduce `(a, b)` to its canonical representative.
    pub fn new(a: S, b: S) -> Result<Self, TorusError> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(TorusError::NonFinite(a.to_f64(), b.to_f64()));
        }
        Ok(Self {
            a: a.wrap_unit(),
            b: b.wrap_unit(),
        })
    }

    pub fn origin() -> Self {
        Self {
            a: S::zero(),
            b: S::zero(),
        }
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    pub fn backing(&self) -> Backing {
        S::BACKING
    }

    pub fn is_canonical(&self) -> bool {
        let in_unit = |x: &S| *x >= S::zero() && *x < S::one();
        in_unit(&self.a) && in_unit(&self.b)
    }

    /// Coordinates reduced modulo `period` in both directions; used for the
    /// quotient tori `Pic⁰ / Γ_r` of side `1/r`.
    pub fn reduce_mod(&self, period: &S) -> Self {
        Self {
            a: self.a.wrap(period),
            b: self.b.wrap(period),
        }
    }

    /// `n·p`.
    pub fn scale(&self, n: i64) -> Self {
        let k = S::from_int(n);
        Self {
            a: (k.clone() * self.a.clone()).wrap_unit(),
            b: (k * self.b.clone()).wrap_unit(),
        }
    }

    /// Translate by `(da, db)` and reduce.
    pub fn shifted(&self, da: S, db: S) -> Self {
        Self {
            a: (self.a.clone() + da).wrap_unit(),
            b: (self.b.clone() + db).wrap_unit(),
        }
    }

    /// `σ(z) = z̄ + 1/2`, i.e. `(a, b) ↦ (a + 1/2, −b)`.
    pub fn sigma(&self) -> Self {
        Self {
            a: (self.a.clone() + S::half()).wrap_unit(),
            b: (-self.b.clone()).wrap_unit(),
        }
    }

    /// `(a, b) ↦ (a, −b)`.
    pub fn reflect_b(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: (-self.b.clone()).wrap_unit(),
        }
    }

    /// Coordinate-wise circular comparison, `On` only if both coordinates are.
    pub fn proximity(&self, other: &Self) -> Proximity {
        let one = S::one();
        let pa = self.a.proximity(&other.a, &one);
        let pb = self.b.proximity(&other.b, &one);
        match (pa, pb) {
            (Proximity::Off, _) | (_, Proximity::Off) => Proximity::Off,
            (Proximity::On, Proximity::On) => Proximity::On,
            _ => Proximity::Ambiguous,
        }
    }

    pub fn to_f64(&self) -> TorusPoint<f64> {
        TorusPoint {
            a: self.a.to_f64(),
            b: self.b.to_f64(),
        }
    }

    /// The complex number `a + b·τ·i` representing this point.
    pub fn to_complex(&self, x: &KleinBottle) -> (f64, f64) {
        (self.a.to_f64(), self.b.to_f64() * x.tau())
    }
}

impl TorusPoint<Rational> {
    /// Exact point from numerator/denominator pairs.
    pub fn exact(a: (i64, i64), b: (i64, i64)) -> Self {
        Self::new(Rational::new(a.0, a.1), Rational::new(b.0, b.1))
            .expect("rationals are always finite")
    }
}

impl<S: Scalar> Add for TorusPoint<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            a: (self.a + rhs.a).wrap_unit(),
            b: (self.b + rhs.b).wrap_unit(),
        }
    }
}

impl<'a, S: Scalar> Add<&'a TorusPoint<S>> for &'a TorusPoint<S> {
    type Output = TorusPoint<S>;
    fn add(self, rhs: Self) -> TorusPoint<S> {
        self.clone() + rhs.clone()
    }
}

impl<S: Scalar> Neg for TorusPoint<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            a: (-self.a).wrap_unit(),
            b: (-self.b).wrap_unit(),
        }
    }
}

impl<S: Scalar> Sub for TorusPoint<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> fmt::Display for TorusPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Canonical point of `z = z_re + i·z_im` on `Y_τ`.
pub fn normalize(z_re: f64, z_im: f64, x: &KleinBottle) -> Result<TorusPoint<f64>, TorusError> {
    if !(z_re.is_finite() && z_im.is_finite()) {
        return Err(TorusError::NonFinite(z_re, z_im));
    }
    TorusPoint::new(z_re, z_im / x.tau())
}

/// `σ` on canonical coordinates. Only the standard model is supported.
pub fn sigma_point<S: Scalar>(p: &TorusPoint<S>, x: &KleinBottle) -> Result<TorusPoint<S>, TorusError> {
    x.require_standard()?;
    Ok(p.sigma())
}
