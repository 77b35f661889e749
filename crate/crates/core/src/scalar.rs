//! Coordinate scalars.
//!
//! Torus coordinates live in `[0, 1)` and come in two backings: exact
//! rationals, used for every classification decision, and IEEE floats, used
//! for the holonomy kernel and for user-facing float input. The [`Scalar`]
//! trait is the small amount of arithmetic the torus and Picard layers need
//! on top of `num_traits::Num`.

use std::fmt;
use std::ops::Neg;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Exact rational coordinate type.
pub type Rational = Ratio<i64>;

/// Which numeric backing a coordinate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Backing {
    ExactRational,
    Float,
}

/// Outcome of comparing a coordinate with a target value modulo a period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proximity {
    /// Equal (exactly, or within the on-line tolerance for floats).
    On,
    /// Inside the float ambiguity band: neither clearly on nor clearly off.
    Ambiguous,
    Off,
}

pub trait Scalar:
    Num + Clone + PartialOrd + Neg<Output = Self> + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const BACKING: Backing;

    /// Values within this distance of a period boundary are snapped to 0.
    const SNAP_TOL: f64;
    /// Distance at or below which two coordinates are considered equal.
    const ON_TOL: f64;
    /// Upper end of the ambiguity band `(ON_TOL, AMBIGUOUS_TOL)`.
    const AMBIGUOUS_TOL: f64;

    /// `numer / denom`, exactly when the backing allows it.
    fn ratio(numer: i64, denom: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn is_finite(&self) -> bool;

    fn floor(&self) -> Self;

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    fn from_int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    fn is_exact() -> bool {
        Self::BACKING == Backing::ExactRational
    }

    /// Representative of `self` modulo `period` in `[0, period)`.
    ///
    /// Float results within `SNAP_TOL * period` of either end are snapped to
    /// zero so that values like `1 - 1e-17` do not flap between
    /// representatives.
    fn wrap(&self, period: &Self) -> Self {
        let q = (self.clone() / period.clone()).floor();
        let r = self.clone() - period.clone() * q;
        if Self::is_exact() {
            return r;
        }
        let rel = (r.to_f64() / period.to_f64()).abs();
        if rel < Self::SNAP_TOL || (1.0 - rel) < Self::SNAP_TOL || rel >= 1.0 {
            Self::zero()
        } else {
            r
        }
    }

    fn wrap_unit(&self) -> Self {
        self.wrap(&Self::one())
    }

    /// Circular comparison of `self` against `target` modulo `period`.
    fn proximity(&self, target: &Self, period: &Self) -> Proximity {
        let diff = (self.clone() - target.clone()).wrap(period);
        if Self::is_exact() {
            return if diff.is_zero() {
                Proximity::On
            } else {
                Proximity::Off
            };
        }
        let d = diff.to_f64();
        let p = period.to_f64();
        let dist = d.min(p - d).abs();
        if dist <= Self::ON_TOL {
            Proximity::On
        } else if dist < Self::AMBIGUOUS_TOL {
            Proximity::Ambiguous
        } else {
            Proximity::Off
        }
    }
}

impl Scalar for Rational {
    const BACKING: Backing = Backing::ExactRational;
    const SNAP_TOL: f64 = 0.0;
    const ON_TOL: f64 = 0.0;
    const AMBIGUOUS_TOL: f64 = 0.0;

    fn ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }
}

impl Scalar for f64 {
    const BACKING: Backing = Backing::Float;
    const SNAP_TOL: f64 = 1e-12;
    const ON_TOL: f64 = 1e-9;
    const AMBIGUOUS_TOL: f64 = 1e-7;

    fn ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn floor(&self) -> Self {
        f64::floor(*self)
    }
}

// Single precision cannot resolve 1e-9; its bands are scaled to its epsilon.
impl Scalar for f32 {
    const BACKING: Backing = Backing::Float;
    const SNAP_TOL: f64 = 1e-6;
    const ON_TOL: f64 = 1e-5;
    const AMBIGUOUS_TOL: f64 = 1e-4;

    fn ratio(numer: i64, denom: i64) -> Self {
        (numer as f64 / denom as f64) as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn is_finite(&self) -> bool {
        f32::is_finite(*self)
    }

    fn floor(&self) -> Self {
        f32::floor(*self)
    }
}

/// Best rational approximation of `x` with denominator at most `max_denom`
/// (continued-fraction convergents and semiconvergents).
pub fn snap_to_rational(x: f64, max_denom: i64) -> Option<Rational> {
    if !x.is_finite() || max_denom < 1 {
        return None;
    }
    let whole = x.floor();
    if whole.abs() > (i64::MAX / 4) as f64 {
        return None;
    }
    let base = whole as i64;
    let frac = x - whole;

    // (p_prev/q_prev, p/q) are consecutive convergents of frac, starting at 1/0, 0/1
    let (mut p_prev, mut q_prev, mut p, mut q) = (1i64, 0i64, 0i64, 1i64);
    let mut rem = frac;
    let err = |r: &Rational| (ToPrimitive::to_f64(r).unwrap_or(f64::NAN) - frac).abs();
    for _ in 0..64 {
        if rem.abs() < 1e-300 {
            break;
        }
        let inv = 1.0 / rem;
        let a = inv.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i64;
        let next = a
            .checked_mul(q)
            .and_then(|v| v.checked_add(q_prev))
            .zip(a.checked_mul(p).and_then(|v| v.checked_add(p_prev)));
        let (q_next, p_next) = match next {
            Some(pair) => pair,
            None => break,
        };
        if q_next > max_denom {
            // largest semiconvergent that still fits, if it beats p/q
            let k = (max_denom - q_prev) / q;
            let conv = Ratio::new(p, q);
            if k > 0 {
                let semi = Ratio::new(p_prev + k * p, q_prev + k * q);
                if err(&semi) < err(&conv) {
                    return Some(semi + base);
                }
            }
            return Some(conv + base);
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        rem = inv - a as f64;
    }
    Some(Ratio::new(p, q) + base)
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values
        .into_iter()
        .fold(1i64, |acc, v| acc.lcm(v.denom()))
}
