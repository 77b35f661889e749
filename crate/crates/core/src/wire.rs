//! JSON wire formats.
//!
//! Rationals are written as strings `"p/q"` (or `"p"` for integers) so that
//! no precision is lost; float coordinates are plain JSON numbers. Parsers
//! are strict: unknown fields are rejected and every value is validated by
//! the same constructors the library uses.

use std::str::FromStr;

use serde::de::{self, DeserializeOwned, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::bundles::{BundleDesc, BundleError, ComplexAtom, RealAtom};
use crate::scalar::{Rational, Scalar};
use crate::{LineBundleClass, ModuliDesc, StableClassKey, TorusPoint};

/// Parse `"p/q"`, `"p"` or a terminating decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("invalid rational {s:?}");
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let w: i64 = if whole_digits.is_empty() {
            0
        } else {
            whole_digits.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = Rational::new(w.checked_mul(scale).and_then(|v| v.checked_add(f)).ok_or_else(bad)?, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapter for rationals as strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }

    pub mod pair {
        use super::*;

        pub fn serialize<S: Serializer>(r: &[Rational; 2], s: S) -> Result<S::Ok, S::Error> {
            [format_rational(&r[0]), format_rational(&r[1])].serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Rational; 2], D::Error> {
            let [x, y] = <[String; 2]>::deserialize(d)?;
            Ok([
                parse_rational(&x).map_err(de::Error::custom)?,
                parse_rational(&y).map_err(de::Error::custom)?,
            ])
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(de::Error::custom))
                .transpose()
        }
    }
}

/// Scalars with a JSON representation.
pub trait WireScalar: Scalar {
    type Repr: Serialize + DeserializeOwned;
    fn to_repr(&self) -> Self::Repr;
    fn from_repr(r: Self::Repr) -> Result<Self, String>;
}

impl WireScalar for Rational {
    type Repr = String;
    fn to_repr(&self) -> String {
        format_rational(self)
    }
    fn from_repr(r: String) -> Result<Self, String> {
        parse_rational(&r)
    }
}

impl WireScalar for f64 {
    type Repr = f64;
    fn to_repr(&self) -> f64 {
        *self
    }
    fn from_repr(r: f64) -> Result<Self, String> {
        if r.is_finite() {
            Ok(r)
        } else {
            Err(format!("non-finite coordinate {r}"))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRepr<R> {
    a: R,
    b: R,
}

impl<S: WireScalar> Serialize for TorusPoint<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        PointRepr {
            a: self.a().to_repr(),
            b: self.b().to_repr(),
        }
        .serialize(s)
    }
}

impl<'de, S: WireScalar> Deserialize<'de> for TorusPoint<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PointRepr::<S::Repr>::deserialize(d)?;
        let a = S::from_repr(repr.a).map_err(de::Error::custom)?;
        let b = S::from_repr(repr.b).map_err(de::Error::custom)?;
        TorusPoint::new(a, b).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineRepr<R> {
    degree: i64,
    a: R,
    b: R,
}

impl<S: WireScalar> Serialize for LineBundleClass<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        LineRepr {
            degree: self.degree(),
            a: self.point().a().to_repr(),
            b: self.point().b().to_repr(),
        }
        .serialize(s)
    }
}

impl<'de, S: WireScalar> Deserialize<'de> for LineBundleClass<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = LineRepr::<S::Repr>::deserialize(d)?;
        let a = S::from_repr(repr.a).map_err(de::Error::custom)?;
        let b = S::from_repr(repr.b).map_err(de::Error::custom)?;
        let point = TorusPoint::new(a, b).map_err(de::Error::custom)?;
        Ok(LineBundleClass::new(repr.degree, point))
    }
}

type ExactLine = LineBundleClass<Rational>;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ComplexAtomRepr {
    Line {
        line: ExactLine,
    },
    Ext2 {
        line: ExactLine,
    },
    Stable {
        rank: u32,
        degree: i64,
        key: TorusPoint<Rational>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RealAtomRepr {
    RealLine {
        line: ExactLine,
    },
    SelfExt {
        line: ExactLine,
    },
    RealStable {
        rank: u32,
        degree: i64,
        #[serde(with = "rational_str")]
        key: Rational,
    },
    ConjPair {
        atom: ComplexAtomRepr,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "flavor", rename_all = "snake_case", deny_unknown_fields)]
enum DescRepr {
    Real { atoms: Vec<RealAtomRepr> },
    Complex { atoms: Vec<ComplexAtomRepr> },
}

impl From<&ComplexAtom> for ComplexAtomRepr {
    fn from(a: &ComplexAtom) -> Self {
        match a {
            ComplexAtom::Line(l) => ComplexAtomRepr::Line { line: l.clone() },
            ComplexAtom::Ext2(l) => ComplexAtomRepr::Ext2 { line: l.clone() },
            ComplexAtom::Stable { rank, degree, key } => ComplexAtomRepr::Stable {
                rank: *rank,
                degree: *degree,
                key: key.clone(),
            },
        }
    }
}

impl TryFrom<ComplexAtomRepr> for ComplexAtom {
    type Error = BundleError;
    fn try_from(r: ComplexAtomRepr) -> Result<Self, BundleError> {
        match r {
            ComplexAtomRepr::Line { line } => Ok(ComplexAtom::Line(line)),
            ComplexAtomRepr::Ext2 { line } => ComplexAtom::self_extension(2, line),
            ComplexAtomRepr::Stable { rank, degree, key } => ComplexAtom::stable(rank, degree, key),
        }
    }
}

impl From<&RealAtom> for RealAtomRepr {
    fn from(a: &RealAtom) -> Self {
        match a {
            RealAtom::RealLine(l) => RealAtomRepr::RealLine { line: l.clone() },
            RealAtom::SelfExt(l) => RealAtomRepr::SelfExt { line: l.clone() },
            RealAtom::RealStable { rank, degree, key } => RealAtomRepr::RealStable {
                rank: *rank,
                degree: *degree,
                key: *key,
            },
            RealAtom::ConjPair(f) => RealAtomRepr::ConjPair { atom: f.into() },
        }
    }
}

impl TryFrom<RealAtomRepr> for RealAtom {
    type Error = BundleError;
    fn try_from(r: RealAtomRepr) -> Result<Self, BundleError> {
        match r {
            RealAtomRepr::RealLine { line } => RealAtom::real_line(line),
            RealAtomRepr::SelfExt { line } => RealAtom::self_ext(line),
            RealAtomRepr::RealStable { rank, degree, key } => RealAtom::real_stable(rank, degree, key),
            RealAtomRepr::ConjPair { atom } => Ok(RealAtom::ConjPair(atom.try_into()?)),
        }
    }
}

impl Serialize for ComplexAtom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ComplexAtomRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexAtom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ComplexAtom::try_from(ComplexAtomRepr::deserialize(d)?).map_err(de::Error::custom)
    }
}

impl Serialize for RealAtom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RealAtomRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealAtom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RealAtom::try_from(RealAtomRepr::deserialize(d)?).map_err(de::Error::custom)
    }
}

impl Serialize for BundleDesc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BundleDesc::Real(atoms) => DescRepr::Real {
                atoms: atoms.iter().map(Into::into).collect(),
            },
            BundleDesc::Complex(atoms) => DescRepr::Complex {
                atoms: atoms.iter().map(Into::into).collect(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BundleDesc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let desc = match DescRepr::deserialize(d)? {
            DescRepr::Real { atoms } => BundleDesc::Real(
                atoms
                    .into_iter()
                    .map(RealAtom::try_from)
                    .collect::<Result<_, _>>()
                    .map_err(de::Error::custom)?,
            ),
            DescRepr::Complex { atoms } => BundleDesc::Complex(
                atoms
                    .into_iter()
                    .map(ComplexAtom::try_from)
                    .collect::<Result<_, _>>()
                    .map_err(de::Error::custom)?,
            ),
        };
        Ok(desc)
    }
}

pub fn parse_line_bundle<S: WireScalar>(json: &str) -> Result<LineBundleClass<S>, serde_json::Error> {
    serde_json::from_str(json)
}

pub fn parse_bundle_desc(json: &str) -> Result<BundleDesc, serde_json::Error> {
    serde_json::from_str(json)
}

pub fn parse_moduli_desc(json: &str) -> Result<ModuliDesc, serde_json::Error> {
    serde_json::from_str(json)
}

pub fn parse_stable_key(json: &str) -> Result<StableClassKey, serde_json::Error> {
    serde_json::from_str(json)
}

impl FromStr for BundleDesc {
    type Err = serde_json::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_bundle_desc(s)
    }
}
