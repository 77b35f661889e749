//! Moduli of stable real bundles.
//!
//! For `g = gcd(r, d)`:
//!
//! * `g = 1`, `d` odd: empty.
//! * `g = 1`, `d` even: a circle `Pic⁰(X)/Γ^ℝ_r` of circumference `1/r`.
//!   Points are the real bundles `W_r,d ⊗ φ(t)`, where `W_r,d` is the
//!   pushforward of a real line bundle of degree `d` along the `r`-fold
//!   cover `ℂ/⟨r, iτ⟩ → Y_τ`.
//! * `g = 2`, `(r', d') = (r/2, d/2)`: every stable real bundle is a
//!   conjugate pair `F ⊕ σ*F̄` with `F` stable of type `(r', d')` and not
//!   fixed by conjugation. The moduli space is the torus `Pic⁰/Γ_{r'}` (side
//!   `1/r'`) modulo the involution `δ(a, b) = (a + d'/(2r'), −b)`; for even
//!   `d'` the real circle `b = 0` is removed.
//! * `g ≥ 3`: empty.
//!
//! Keys use the determinant normalisation described in [`crate::bundles`].

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundles::{conj_stable_key, BundleError, ComplexAtom, RealAtom};
use crate::picard::FixedClassKind;
use crate::scalar::{snap_to_rational, Proximity, Rational, Scalar};
use crate::wire::rational_str;
use crate::{ExactLineBundle, ExactPoint, FloatPoint, KleinBottle};

/// Largest denominator accepted when snapping float coordinates.
pub const MAX_SNAP_DENOM: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuliError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("there are no stable real bundles of rank {r} and degree {d}")]
    NoStableBundles { r: u32, d: i64 },
    #[error("point {point} is not on the real circle of the (r={r}, d={d}) moduli space{}", if *.obstructed { " (it is a fixed but non-real class)" } else { "" })]
    OffRealCircle { r: u32, d: i64, point: String, obstructed: bool },
    #[error("point {point} lies on the removed real locus of the (r={r}, d={d}) moduli space")]
    ExcludedRealLocus { r: u32, d: i64, point: String },
    #[error("coordinate {value} is within {tol:e} of the boundary {boundary} but does not snap onto it")]
    Ambiguous { value: f64, boundary: String, tol: f64 },
    #[error("coordinate {0} is not finite")]
    NonFinite(f64),
    #[error("the fixed locus of conjugation on Pic⁰/Γ_r is only described for odd r, got {0}")]
    EvenRank(u32),
    #[error("atom {0} is not stable")]
    NotStable(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// True iff a stable real bundle of rank `r ≥ 1` and degree `d` exists.
pub fn exists_stable(r: u32, d: i64) -> bool {
    if r == 0 {
        return false;
    }
    match i64::from(r).gcd(&d) {
        1 => d % 2 == 0,
        2 => true,
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuliKind {
    Empty,
    Circle,
    TorusQuotient,
    PuncturedTorusQuotient,
}

impl fmt::Display for ModuliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// How a moduli space is coordinatised.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Parametrization {
    Empty,
    /// `t ∈ [0, circumference)`, `t ↦ W ⊗ φ(t)`.
    Circle {
        #[serde(with = "rational_str")]
        circumference: Rational,
    },
    /// `(a, b) ∈ [0, side)²` modulo `(a, b) ↦ (a + involution_shift, −b)`.
    /// When `removed_b` is set, the circle `b = removed_b` is deleted.
    TorusQuotient {
        #[serde(with = "rational_str")]
        side: Rational,
        #[serde(with = "rational_str")]
        involution_shift: Rational,
        free: bool,
        #[serde(with = "rational_str::option", default, skip_serializing_if = "Option::is_none")]
        removed_b: Option<Rational>,
    },
}

/// The two circles fixed by conjugation on a side-`side` quotient torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealLocus {
    #[serde(with = "rational_str")]
    pub side: Rational,
    /// `b` coordinate of the circle of real classes.
    #[serde(with = "rational_str")]
    pub real_b: Rational,
    /// `b` coordinate of the circle of fixed, non-real classes.
    #[serde(with = "rational_str")]
    pub obstructed_b: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuliDesc {
    pub r: u32,
    pub d: i64,
    pub kind: ModuliKind,
    pub dimension: u8,
    pub parametrization: Parametrization,
    pub real_locus: Option<RealLocus>,
}

/// Fixed locus of `δ` on a quotient torus of side `side` whose involution
/// has zero shift.
fn delta_fixed_circles(side: Rational) -> RealLocus {
    RealLocus {
        side,
        real_b: Rational::zero(),
        obstructed_b: side / 2,
    }
}

/// Describe the moduli space of stable real bundles of rank `r`, degree `d`.
///
/// `real_locus` is the `δ`-fixed set inside the relevant quotient torus: for
/// the circle case, the real circle is the moduli space itself; for the
/// `gcd = 2`, `d'` even case, the real circle is the removed locus and the
/// obstructed circle survives; for `d'` odd, `δ` is free and there is none.
pub fn moduli_descriptor(r: u32, d: i64) -> Result<ModuliDesc, ModuliError> {
    if r == 0 {
        return Err(ModuliError::ZeroRank);
    }
    let empty = ModuliDesc {
        r,
        d,
        kind: ModuliKind::Empty,
        dimension: 0,
        parametrization: Parametrization::Empty,
        real_locus: None,
    };
    if !exists_stable(r, d) {
        return Ok(empty);
    }
    let g = i64::from(r).gcd(&d);
    if g == 1 {
        let side = Rational::new(1, i64::from(r));
        return Ok(ModuliDesc {
            kind: ModuliKind::Circle,
            dimension: 1,
            parametrization: Parametrization::Circle { circumference: side },
            real_locus: (r % 2 == 1).then(|| delta_fixed_circles(side)),
            ..empty
        });
    }
    let (rp, dp) = (i64::from(r / 2), d / 2);
    let side = Rational::new(1, rp);
    let shift = Rational::new(dp, 2 * rp).wrap(&side);
    let free = dp % 2 != 0;
    Ok(ModuliDesc {
        kind: if free {
            ModuliKind::TorusQuotient
        } else {
            ModuliKind::PuncturedTorusQuotient
        },
        dimension: 2,
        parametrization: Parametrization::TorusQuotient {
            side,
            involution_shift: shift,
            free,
            removed_b: (!free).then(Rational::zero),
        },
        real_locus: (!free).then(|| delta_fixed_circles(side)),
        ..empty
    })
}

/// Canonical identifier of an isomorphism class of stable real bundles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StableClassKey {
    pub r: u32,
    pub d: i64,
    pub value: KeyValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum KeyValue {
    /// Coordinate on the moduli circle.
    Circle {
        #[serde(with = "rational_str")]
        t: Rational,
    },
    /// A `δ`-orbit `{rep, partner}` with `rep < partner` (or equal).
    Orbit { rep: ExactPoint, partner: ExactPoint },
}

impl fmt::Display for StableClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            KeyValue::Circle { t } => write!(f, "(r={}, d={}) t={}", self.r, self.d, t),
            KeyValue::Orbit { rep, partner } => {
                write!(f, "(r={}, d={}) {{{}, {}}}", self.r, self.d, rep, partner)
            }
        }
    }
}

/// Canonical key of the stable real bundle with rank `r`, degree `d` at the
/// moduli point `p`.
///
/// * Circle case: `p = (t, b)` must have `b ≡ 0 (mod 1/r)`; the key is
///   `t mod 1/r`.
/// * `gcd = 2`: `p` is the key of `F` (side `1/r'`); the key is the sorted
///   orbit `{p, δ(p)}`. Points with `b ≡ 0` are rejected when `d'` is even.
pub fn canonical_key(r: u32, d: i64, p: &ExactPoint) -> Result<StableClassKey, ModuliError> {
    let desc = moduli_descriptor(r, d)?;
    match desc.parametrization {
        Parametrization::Empty => Err(ModuliError::NoStableBundles { r, d }),
        Parametrization::Circle { circumference } => {
            let reduced = p.reduce_mod(&circumference);
            if !reduced.b().is_zero() {
                let obstructed = r % 2 == 1 && *reduced.b() == circumference / 2;
                return Err(ModuliError::OffRealCircle {
                    r,
                    d,
                    point: p.to_string(),
                    obstructed,
                });
            }
            Ok(StableClassKey {
                r,
                d,
                value: KeyValue::Circle { t: *reduced.a() },
            })
        }
        Parametrization::TorusQuotient { side, removed_b, .. } => {
            let reduced = p.reduce_mod(&side);
            if removed_b.as_ref() == Some(reduced.b()) {
                return Err(ModuliError::ExcludedRealLocus {
                    r,
                    d,
                    point: p.to_string(),
                });
            }
            let partner = conj_stable_key(r / 2, d / 2, &reduced);
            let (rep, partner) = if partner < reduced {
                (partner, reduced)
            } else {
                (reduced, partner)
            };
            Ok(StableClassKey {
                r,
                d,
                value: KeyValue::Orbit { rep, partner },
            })
        }
    }
}

/// Float variant of [`canonical_key`]: coordinates are snapped to rationals
/// with denominator at most [`MAX_SNAP_DENOM`]. A coordinate within the
/// ambiguity tolerance of a boundary that does not snap onto it is an error.
pub fn canonical_key_float(r: u32, d: i64, p: &FloatPoint) -> Result<StableClassKey, ModuliError> {
    let desc = moduli_descriptor(r, d)?;
    let (side, shift) = match desc.parametrization {
        Parametrization::Empty => return Err(ModuliError::NoStableBundles { r, d }),
        Parametrization::Circle { circumference } => (circumference, Rational::zero()),
        Parametrization::TorusQuotient {
            side, involution_shift, ..
        } => (side, involution_shift),
    };
    let mut a_bounds = vec![Rational::zero()];
    if !shift.is_zero() {
        a_bounds.push(shift);
    }
    let b_bounds = [Rational::zero(), side / 2];
    let a = snap_coordinate(*p.a(), &a_bounds, &side)?;
    let b = snap_coordinate(*p.b(), &b_bounds, &side)?;
    canonical_key(r, d, &ExactPoint::new(a, b).expect("rationals are finite"))
}

/// Snap a float coordinate to a rational. Within `ON_TOL` of a boundary it
/// snaps onto the boundary; inside the ambiguity band, or when snapping
/// would land on a boundary the float is not clearly on, it is an error.
fn snap_coordinate(raw: f64, bounds: &[Rational], period: &Rational) -> Result<Rational, ModuliError> {
    let period_f = Scalar::to_f64(period);
    let ambiguous = |bound: &Rational| ModuliError::Ambiguous {
        value: raw,
        boundary: bound.to_string(),
        tol: f64::AMBIGUOUS_TOL,
    };
    for bound in bounds {
        match raw.proximity(&Scalar::to_f64(bound), &period_f) {
            Proximity::On => return Ok(*bound),
            Proximity::Ambiguous => return Err(ambiguous(bound)),
            Proximity::Off => {}
        }
    }
    let snapped = snap_to_rational(raw, MAX_SNAP_DENOM).ok_or(ModuliError::NonFinite(raw))?;
    match bounds.iter().find(|b| (snapped - *b).wrap(period).is_zero()) {
        Some(bound) => Err(ambiguous(bound)),
        None => Ok(snapped),
    }
}

/// Which fixed circle a point of `Pic⁰/Γ_r` lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocusTag {
    Real,
    Obstructed,
}

impl fmt::Display for LocusTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocusTag::Real => "real",
            LocusTag::Obstructed => "obstructed",
        })
    }
}

/// Fixed locus of conjugation on `Pic⁰/Γ_r`, `r` odd: the circles `b = 0`
/// (real classes) and `b = 1/(2r)` (fixed, non-real classes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLocus {
    r: u32,
    locus: RealLocus,
}

impl FixedLocus {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn side(&self) -> Rational {
        self.locus.side
    }

    pub fn circles(&self) -> [(LocusTag, Rational); 2] {
        [
            (LocusTag::Real, self.locus.real_b),
            (LocusTag::Obstructed, self.locus.obstructed_b),
        ]
    }

    /// Tag of `p` (taken modulo `1/r`), or `None` if it is not fixed.
    pub fn tag_of(&self, p: &ExactPoint) -> Option<LocusTag> {
        let b = *p.reduce_mod(&self.locus.side).b();
        if b == self.locus.real_b {
            Some(LocusTag::Real)
        } else if b == self.locus.obstructed_b {
            Some(LocusTag::Obstructed)
        } else {
            None
        }
    }

    /// A degree-0 class in `Pic⁰` mapping to `p` that is itself fixed by
    /// `σ₀`. Real points lift to `b = 0`, obstructed ones to `b = 1/2`.
    pub fn lift(&self, p: &ExactPoint) -> Option<ExactLineBundle> {
        let tag = self.tag_of(p)?;
        let a = p.a().wrap(&self.locus.side);
        let b = match tag {
            LocusTag::Real => Rational::zero(),
            LocusTag::Obstructed => Rational::new(1, 2),
        };
        Some(ExactLineBundle::new(0, ExactPoint::new(a, b).expect("rationals are finite")))
    }

    pub fn locus(&self) -> &RealLocus {
        &self.locus
    }
}

pub fn fixed_locus_delta(r: u32) -> Result<FixedLocus, ModuliError> {
    if r == 0 {
        return Err(ModuliError::ZeroRank);
    }
    if r.is_multiple_of(2) {
        return Err(ModuliError::EvenRank(r));
    }
    Ok(FixedLocus {
        r,
        locus: delta_fixed_circles(Rational::new(1, i64::from(r))),
    })
}

/// The real circle inside the coprime moduli space, with its obstructed
/// companion.
pub fn real_locus_in_coprime_moduli(r: u32, d: i64) -> Result<RealLocus, ModuliError> {
    let desc = moduli_descriptor(r, d)?;
    match (desc.kind, desc.real_locus) {
        (ModuliKind::Circle, Some(locus)) => Ok(locus),
        (ModuliKind::Circle, None) => Err(ModuliError::EvenRank(r)),
        _ => Err(ModuliError::NoStableBundles { r, d }),
    }
}

/// How a stable real bundle of coprime type `(r, d)` is built: push a real
/// line bundle `ξ` of degree `d` forward along the unramified cover
/// `f: Y' = ℂ/⟨r, iτ⟩ → Y_τ`, which intertwines `σ'(z) = z̄ + r/2` with `σ`,
/// then twist by `φ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PushforwardRecipe {
    pub r: u32,
    pub d: i64,
    /// `(real period, imaginary period)` of `Λ'`, the imaginary one in units
    /// of `τ`.
    pub cover_lattice: (i64, i64),
    pub covering_degree: u32,
    /// Translation part of `σ'`.
    pub cover_involution_shift: Rational,
    /// `ξ` on `Y'`, in coordinates `z' = r·a' + iτ·b'`.
    pub source: ExactLineBundle,
    pub twist: Rational,
}

impl PushforwardRecipe {
    /// `Y'` as a standard Klein bottle: `ℂ/⟨r, iτ⟩ ≅ ℂ/⟨1, iτ/r⟩`.
    pub fn cover(&self, x: &KleinBottle) -> Result<KleinBottle, crate::TorusError> {
        KleinBottle::standard(x.tau() / f64::from(self.r))
    }

    /// `f*` on `Pic⁰` coordinates: `(a, b) ↦ (a, r·b)`.
    pub fn pullback(&self, p: &ExactPoint) -> ExactPoint {
        let r = Rational::from_integer(i64::from(self.r));
        ExactPoint::new(*p.a(), p.b() * r).expect("rationals are finite")
    }

    /// The norm map on points: `(a', b') ↦ (r·a', b')`.
    pub fn norm(&self, p: &ExactPoint) -> ExactPoint {
        let r = Rational::from_integer(i64::from(self.r));
        ExactPoint::new(p.a() * r, *p.b()).expect("rationals are finite")
    }

    /// `ker f*`: the points `(0, k/r)`.
    pub fn pullback_kernel(&self) -> Vec<ExactPoint> {
        let r = i64::from(self.r);
        (0..r).map(|k| ExactPoint::exact((0, 1), (k, r))).collect()
    }

    /// `det f_*ξ ⊗ φ(r·t) = Nm(ξ) ⊗ det f_*O ⊗ φ(r·t)`, with
    /// `det f_*O = ⊗_{χ ∈ ker f*} χ`.
    pub fn determinant(&self) -> ExactLineBundle {
        let norm = self.norm(self.source.point());
        let kernel_sum = self
            .pullback_kernel()
            .into_iter()
            .fold(ExactPoint::origin(), |acc, p| acc + p);
        let twist = ExactPoint::new(self.twist, Rational::zero())
            .expect("rationals are finite")
            .scale(i64::from(self.r));
        ExactLineBundle::new(self.d, norm + kernel_sum + twist)
    }

    /// Key implied by [`Self::determinant`].
    pub fn key(&self) -> Rational {
        let det = self.determinant();
        let r = Rational::from_integer(i64::from(self.r));
        (det.point().a() / r).wrap(&(Rational::one() / r))
    }

    /// Realness of `ξ` on `Y'`.
    pub fn source_kind(&self) -> Result<FixedClassKind, ModuliError> {
        Ok(self.source.classify_fixed().map_err(BundleError::from)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StableConstruction {
    pub atom: RealAtom,
    pub key: StableClassKey,
    pub recipe: PushforwardRecipe,
}

/// Build the stable real bundle `W_r,d ⊗ φ(t)` for `gcd(r, d) = 1`, `d` even.
pub fn construct_stable_real(r: u32, d: i64, t: Rational) -> Result<StableConstruction, ModuliError> {
    let desc = moduli_descriptor(r, d)?;
    if desc.kind != ModuliKind::Circle {
        return Err(ModuliError::NoStableBundles { r, d });
    }
    let recipe = PushforwardRecipe {
        r,
        d,
        cover_lattice: (i64::from(r), 1),
        covering_degree: r,
        cover_involution_shift: Rational::new(i64::from(r), 2),
        source: ExactLineBundle::new(d, ExactPoint::origin()),
        twist: t,
    };
    let key_t = recipe.key();
    let atom = RealAtom::real_stable(r, d, key_t)?;
    let key = canonical_key(r, d, &ExactPoint::new(key_t, Rational::zero()).expect("rationals are finite"))?;
    Ok(StableConstruction { atom, key, recipe })
}

/// Key of a stable real atom; non-stable atoms are rejected.
pub fn key_of_atom(atom: &RealAtom) -> Result<StableClassKey, ModuliError> {
    let zero = Rational::zero();
    match atom {
        RealAtom::RealLine(l) => canonical_key(1, l.degree(), &ExactPoint::new(*l.point().a(), zero).expect("finite")),
        RealAtom::RealStable { rank, degree, key } => {
            canonical_key(*rank, *degree, &ExactPoint::new(*key, zero).expect("finite"))
        }
        RealAtom::ConjPair(ComplexAtom::Line(l)) => canonical_key(2, 2 * l.degree(), l.point()),
        RealAtom::ConjPair(ComplexAtom::Stable { rank, degree, key }) => canonical_key(2 * rank, 2 * degree, key),
        other => Err(ModuliError::NotStable(other.to_string())),
    }
}

/// Inverse of [`key_of_atom`].
pub fn atom_of_key(key: &StableClassKey) -> Result<RealAtom, ModuliError> {
    match &key.value {
        KeyValue::Circle { t } => Ok(RealAtom::real_stable(key.r, key.d, *t)?),
        KeyValue::Orbit { rep, .. } => Ok(RealAtom::ConjPair(ComplexAtom::stable(key.r / 2, key.d / 2, rep.clone())?)),
    }
}
