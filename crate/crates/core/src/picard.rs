//! Line bundle classes on `Y_τ` and the real structure on `Pic^d`.
//!
//! A class of degree `d` is written `O(d·0̲) ⊗ φ(p)`, where `φ(p)` is the
//! degree-zero bundle `O(p − 0̲)`. With this reference the conjugation
//! `L ↦ σ*L̄` acts as `(a, b) ↦ (a + d/2, −b)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Proximity, Rational, Scalar};
use crate::torus::TorusPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PicardError {
    #[error("class {0} lies within the float ambiguity band of a fixed line; use exact coordinates")]
    Ambiguous(String),
    #[error("torsion order must be at least 1")]
    ZeroOrder,
    #[error("degree {0} is odd; no real line bundle has odd degree")]
    OddDegree(i64),
}

/// `O(d·0̲) ⊗ φ(point)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineBundleClass<S> {
    degree: i64,
    point: TorusPoint<S>,
}

/// Position of a class relative to the involution `σ_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FixedClassKind {
    NotFixed,
    /// Fixed and the complexification of a real line bundle.
    RealizableReal,
    /// Fixed, but no real structure exists.
    FixedNotReal,
}

impl FixedClassKind {
    pub fn is_fixed(self) -> bool {
        !matches!(self, FixedClassKind::NotFixed)
    }
}

impl fmt::Display for FixedClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FixedClassKind::NotFixed => "NotFixed",
            FixedClassKind::RealizableReal => "RealizableReal",
            FixedClassKind::FixedNotReal => "FixedNotReal",
        };
        f.write_str(s)
    }
}

impl<S: Scalar> LineBundleClass<S> {
    pub fn new(degree: i64, point: TorusPoint<S>) -> Self {
        Self { degree, point }
    }

    /// The structure sheaf.
    pub fn trivial() -> Self {
        Self::new(0, TorusPoint::origin())
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn point(&self) -> &TorusPoint<S> {
        &self.point
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            degree: self.degree + other.degree,
            point: &self.point + &other.point,
        }
    }

    pub fn dual(&self) -> Self {
        Self {
            degree: -self.degree,
            point: -self.point.clone(),
        }
    }

    /// `L^{⊗n}` for any integer `n`.
    pub fn power(&self, n: i64) -> Self {
        Self {
            degree: self.degree * n,
            point: self.point.scale(n),
        }
    }

    /// The class of `σ*L̄`.
    pub fn sigma_conj(&self) -> Self {
        let shift = S::ratio(self.degree, 2);
        Self {
            degree: self.degree,
            point: self.point.shifted(shift, S::zero()).reflect_b(),
        }
    }

    /// The real reference bundle `O(n·D)`, `D = 0̲ + σ(0̲)`, of degree `2n`.
    ///
    /// `O(D) = O(2·0̲) ⊗ φ(1/2)`, so `O(nD)` has point `(n/2, 0)`.
    pub fn real_reference(n: i64) -> Self {
        Self {
            degree: 2 * n,
            point: TorusPoint::origin().shifted(S::ratio(n, 2), S::zero()),
        }
    }

    /// Degree-zero class `L ⊗ O(nD)^*` for `deg L = 2n`.
    pub fn untwist_even(&self) -> Result<Self, PicardError> {
        if self.degree % 2 != 0 {
            return Err(PicardError::OddDegree(self.degree));
        }
        Ok(self.tensor(&Self::real_reference(self.degree / 2).dual()))
    }

    /// Position relative to `σ_d`: odd degrees are never fixed; even
    /// degrees are fixed exactly on `b ∈ {0, 1/2}`, real on `b = 0`.
    pub fn classify_fixed(&self) -> Result<FixedClassKind, PicardError> {
        if self.degree % 2 != 0 {
            return Ok(FixedClassKind::NotFixed);
        }
        let one = S::one();
        let b = self.point.b();
        let on_zero = b.proximity(&S::zero(), &one);
        let on_half = b.proximity(&S::half(), &one);
        match (on_zero, on_half) {
            (Proximity::Ambiguous, _) | (_, Proximity::Ambiguous) => {
                Err(PicardError::Ambiguous(self.to_string()))
            }
            (Proximity::On, _) => Ok(FixedClassKind::RealizableReal),
            (_, Proximity::On) => Ok(FixedClassKind::FixedNotReal),
            _ => Ok(FixedClassKind::NotFixed),
        }
    }

    pub fn to_f64(&self) -> LineBundleClass<f64> {
        LineBundleClass::new(self.degree, self.point.to_f64())
    }
}

impl<S: Scalar> fmt::Display for LineBundleClass<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, {})", self.degree, self.point)
    }
}

/// `L1 ⊗ L2`.
pub fn tensor<S: Scalar>(l1: &LineBundleClass<S>, l2: &LineBundleClass<S>) -> LineBundleClass<S> {
    l1.tensor(l2)
}

pub fn sigma_conj<S: Scalar>(l: &LineBundleClass<S>) -> LineBundleClass<S> {
    l.sigma_conj()
}

pub fn classify_fixed<S: Scalar>(l: &LineBundleClass<S>) -> Result<FixedClassKind, PicardError> {
    l.classify_fixed()
}

/// A real line bundle of degree `d` exists iff `d` is even.
pub fn real_line_bundle_exists(d: i64) -> bool {
    d % 2 == 0
}

/// The `r`-torsion subgroup `Γ_r ⊂ Pic⁰`, or its real part `Γ_r^ℝ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionSubgroup {
    order: u32,
    real_only: bool,
    elements: BTreeSet<TorusPoint<Rational>>,
}

impl TorsionSubgroup {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn real_only(&self) -> bool {
        self.real_only
    }

    pub fn elements(&self) -> &BTreeSet<TorusPoint<Rational>> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &TorusPoint<Rational>) -> bool {
        self.elements.contains(p)
    }
}

/// `Γ_r = {(m/r, n/r)}` or, with `real_only`, `Γ_r^ℝ = {(k/r, 0)}`.
pub fn torsion_subgroup(r: u32, real_only: bool) -> Result<TorsionSubgroup, PicardError> {
    if r == 0 {
        return Err(PicardError::ZeroOrder);
    }
    let r = i64::from(r);
    let b_range = if real_only { 0..1 } else { 0..r };
    let elements = (0..r)
        .flat_map(|m| b_range.clone().map(move |n| TorusPoint::exact((m, r), (n, r))))
        .collect();
    Ok(TorsionSubgroup {
        order: r as u32,
        real_only,
        elements,
    })
}

/// `r·p == 0` exactly.
pub fn is_torsion(p: &TorusPoint<Rational>, r: i64) -> bool {
    p.scale(r) == TorusPoint::origin()
}
