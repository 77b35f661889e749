//! Descriptor algebra for vector bundles on a Klein bottle.
//!
//! Every bundle handled here is a formal direct sum of indecomposable atoms.
//! Complex atoms live on `X_ℂ = Y_τ`:
//!
//! * `Line(L)`: a line bundle,
//! * `Ext2(ξ)`: the unique nontrivial extension of `ξ` by itself,
//! * `Stable { rank, degree, key }`: a stable bundle with coprime rank and
//!   degree, identified by a point of `Pic⁰ / Γ_rank`.
//!
//! Real atoms are real line bundles, their self-extensions `W(ξ)`, stable
//! real bundles of coprime type, and conjugate pairs `F ⊕ σ*F̄` of a complex
//! atom with the swap real structure (`V(L)` when `F = L` is a line bundle).
//!
//! Keys of stable atoms are determinant-normalised: `Stable { r, d, key }`
//! has determinant `O(d·0̲) ⊗ φ(r·key)`, and `key` is reduced modulo `1/r`.
//! With this choice conjugation acts on keys by
//! `(a, b) ↦ (a + d/(2r), −b) mod 1/r`, which for `r = 1` is exactly
//! `L ↦ σ*L̄` on `Pic^d`.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::picard::{FixedClassKind, PicardError};
use crate::scalar::{Rational, Scalar};
use crate::wire::rational_str;
use crate::{ExactLineBundle, ExactPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BundleError {
    #[error("line bundle {0} is not the complexification of a real line bundle")]
    NotReal(String),
    #[error("stable atoms need coprime rank and degree, got rank {rank}, degree {degree}")]
    NotCoprime { rank: u32, degree: i64 },
    #[error("real stable atoms need even degree, got {0}")]
    OddDegree(i64),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("self-extensions of rank {0} are not classified; only rank 2 is supported")]
    NotClassified(u32),
    #[error("empty descriptor")]
    Empty,
    #[error("cannot compare a real descriptor with a complex one")]
    MixedFlavor,
    #[error("expected a {expected} descriptor")]
    WrongFlavor { expected: Flavor },
    #[error("rank-2 classification needs rank 2, got {0}")]
    NotRank2(u32),
    #[error(transparent)]
    Picard(#[from] PicardError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Real,
    Complex,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Real => "real",
            Flavor::Complex => "complex",
        })
    }
}

/// Conjugation `F ↦ σ*F̄` on the key of a stable atom of type `(rank, degree)`.
pub fn conj_stable_key(rank: u32, degree: i64, key: &ExactPoint) -> ExactPoint {
    let r = i64::from(rank);
    let side = Rational::new(1, r);
    key.shifted(Rational::new(degree, 2 * r), Rational::zero())
        .reflect_b()
        .reduce_mod(&side)
}

/// Indecomposable bundle on `X_ℂ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComplexAtom {
    Line(ExactLineBundle),
    Ext2(ExactLineBundle),
    Stable { rank: u32, degree: i64, key: ExactPoint },
}

impl ComplexAtom {
    pub fn line(l: ExactLineBundle) -> Self {
        ComplexAtom::Line(l)
    }

    /// Stable atom with coprime `(rank, degree)`. Rank one gives a `Line`.
    pub fn stable(rank: u32, degree: i64, key: ExactPoint) -> Result<Self, BundleError> {
        if rank == 0 {
            return Err(BundleError::ZeroRank);
        }
        if i64::from(rank).gcd(&degree) != 1 {
            return Err(BundleError::NotCoprime { rank, degree });
        }
        if rank == 1 {
            return Ok(ComplexAtom::Line(ExactLineBundle::new(degree, key)));
        }
        let side = Rational::new(1, i64::from(rank));
        Ok(ComplexAtom::Stable {
            rank,
            degree,
            key: key.reduce_mod(&side),
        })
    }

    /// The indecomposable self-extension of `ξ` of the given rank; only the
    /// rank-2 case is supported.
    pub fn self_extension(rank: u32, xi: ExactLineBundle) -> Result<Self, BundleError> {
        match rank {
            2 => Ok(ComplexAtom::Ext2(xi)),
            0 => Err(BundleError::ZeroRank),
            r => Err(BundleError::NotClassified(r)),
        }
    }

    pub fn rank(&self) -> u32 {
        match self {
            ComplexAtom::Line(_) => 1,
            ComplexAtom::Ext2(_) => 2,
            ComplexAtom::Stable { rank, .. } => *rank,
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            ComplexAtom::Line(l) => l.degree(),
            ComplexAtom::Ext2(xi) => 2 * xi.degree(),
            ComplexAtom::Stable { degree, .. } => *degree,
        }
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.degree(), i64::from(self.rank()))
    }

    pub fn is_stable(&self) -> bool {
        !matches!(self, ComplexAtom::Ext2(_))
    }

    /// `σ*F̄`.
    pub fn conj(&self) -> Self {
        match self {
            ComplexAtom::Line(l) => ComplexAtom::Line(l.sigma_conj()),
            ComplexAtom::Ext2(xi) => ComplexAtom::Ext2(xi.sigma_conj()),
            ComplexAtom::Stable { rank, degree, key } => ComplexAtom::Stable {
                rank: *rank,
                degree: *degree,
                key: conj_stable_key(*rank, *degree, key),
            },
        }
    }

    /// `F ⊗ M` for a line bundle `M`.
    pub fn tensor_line(&self, m: &ExactLineBundle) -> Self {
        match self {
            ComplexAtom::Line(l) => ComplexAtom::Line(l.tensor(m)),
            ComplexAtom::Ext2(xi) => ComplexAtom::Ext2(xi.tensor(m)),
            ComplexAtom::Stable { rank, degree, key } => {
                let side = Rational::new(1, i64::from(*rank));
                ComplexAtom::Stable {
                    rank: *rank,
                    degree: degree + i64::from(*rank) * m.degree(),
                    key: (key + m.point()).reduce_mod(&side),
                }
            }
        }
    }

    /// The real atom whose complexification is `self`, if there is one.
    pub fn real_form(&self) -> Result<Option<RealAtom>, BundleError> {
        Ok(match self {
            ComplexAtom::Line(l) => match l.classify_fixed()? {
                FixedClassKind::RealizableReal => Some(RealAtom::RealLine(l.clone())),
                _ => None,
            },
            ComplexAtom::Ext2(xi) => match xi.classify_fixed()? {
                FixedClassKind::RealizableReal => Some(RealAtom::SelfExt(xi.clone())),
                _ => None,
            },
            ComplexAtom::Stable { rank, degree, key } => {
                if degree % 2 == 0 && key.b().is_zero() {
                    Some(RealAtom::RealStable {
                        rank: *rank,
                        degree: *degree,
                        key: *key.a(),
                    })
                } else {
                    None
                }
            }
        })
    }

    /// Canonical member of `{F, σ*F̄}`.
    pub fn conj_class_rep(&self) -> Self {
        let c = self.conj();
        if c < *self {
            c
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for ComplexAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexAtom::Line(l) => write!(f, "Line{l}"),
            ComplexAtom::Ext2(xi) => write!(f, "Ext2{xi}"),
            ComplexAtom::Stable { rank, degree, key } => write!(f, "Stable(r={rank}, d={degree}, key={key})"),
        }
    }
}

/// Indecomposable real bundle on `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RealAtom {
    /// A real line bundle, given by its complexification.
    RealLine(ExactLineBundle),
    /// `W(ξ)`, the nontrivial self-extension of a real line bundle.
    SelfExt(ExactLineBundle),
    /// Stable real bundle with `gcd(rank, degree) = 1`; `key ∈ [0, 1/rank)`.
    RealStable { rank: u32, degree: i64, key: Rational },
    /// The real bundle underlying `F ⊕ σ*F̄`.
    ConjPair(ComplexAtom),
}

fn require_real(l: &ExactLineBundle) -> Result<(), BundleError> {
    match l.classify_fixed()? {
        FixedClassKind::RealizableReal => Ok(()),
        _ => Err(BundleError::NotReal(l.to_string())),
    }
}

impl RealAtom {
    pub fn real_line(l: ExactLineBundle) -> Result<Self, BundleError> {
        require_real(&l)?;
        Ok(RealAtom::RealLine(l))
    }

    pub fn self_ext(xi: ExactLineBundle) -> Result<Self, BundleError> {
        require_real(&xi)?;
        Ok(RealAtom::SelfExt(xi))
    }

    /// Stable real atom; rank one gives a `RealLine`.
    pub fn real_stable(rank: u32, degree: i64, key: Rational) -> Result<Self, BundleError> {
        if rank == 0 {
            return Err(BundleError::ZeroRank);
        }
        if degree % 2 != 0 {
            return Err(BundleError::OddDegree(degree));
        }
        if i64::from(rank).gcd(&degree) != 1 {
            return Err(BundleError::NotCoprime { rank, degree });
        }
        let side = Rational::new(1, i64::from(rank));
        let key = key.wrap(&side);
        if rank == 1 {
            let point = ExactPoint::new(key, Rational::zero()).expect("rationals are finite");
            return Ok(RealAtom::RealLine(ExactLineBundle::new(degree, point)));
        }
        Ok(RealAtom::RealStable { rank, degree, key })
    }

    pub fn conj_pair(f: ComplexAtom) -> Self {
        RealAtom::ConjPair(f)
    }

    pub fn rank(&self) -> u32 {
        match self {
            RealAtom::RealLine(_) => 1,
            RealAtom::SelfExt(_) => 2,
            RealAtom::RealStable { rank, .. } => *rank,
            RealAtom::ConjPair(f) => 2 * f.rank(),
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            RealAtom::RealLine(l) => l.degree(),
            RealAtom::SelfExt(xi) => 2 * xi.degree(),
            RealAtom::RealStable { degree, .. } => *degree,
            RealAtom::ConjPair(f) => 2 * f.degree(),
        }
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.degree(), i64::from(self.rank()))
    }

    /// Stable as a real bundle, assuming the atom is normalised.
    pub fn is_stable(&self) -> bool {
        match self {
            RealAtom::RealLine(_) | RealAtom::RealStable { .. } => true,
            RealAtom::SelfExt(_) => false,
            RealAtom::ConjPair(f) => f.is_stable(),
        }
    }

    /// Complexification, as a list of complex atoms.
    pub fn complexify(&self) -> Vec<ComplexAtom> {
        match self {
            RealAtom::RealLine(l) => vec![ComplexAtom::Line(l.clone())],
            RealAtom::SelfExt(xi) => vec![ComplexAtom::Ext2(xi.clone())],
            RealAtom::RealStable { rank, degree, key } => vec![ComplexAtom::Stable {
                rank: *rank,
                degree: *degree,
                key: ExactPoint::new(*key, Rational::zero()).expect("rationals are finite"),
            }],
            RealAtom::ConjPair(f) => vec![f.clone(), f.conj()],
        }
    }

    /// `E ⊗ M` for a real line bundle `M`.
    pub fn tensor_real_line(&self, m: &ExactLineBundle) -> Result<Self, BundleError> {
        require_real(m)?;
        Ok(match self {
            RealAtom::RealLine(l) => RealAtom::RealLine(l.tensor(m)),
            RealAtom::SelfExt(xi) => RealAtom::SelfExt(xi.tensor(m)),
            RealAtom::RealStable { rank, degree, key } => {
                let r = i64::from(*rank);
                RealAtom::RealStable {
                    rank: *rank,
                    degree: degree + r * m.degree(),
                    key: (key + m.point().a()).wrap(&Rational::new(1, r)),
                }
            }
            RealAtom::ConjPair(f) => RealAtom::ConjPair(f.tensor_line(m)),
        })
    }

    /// Normal form: a conjugate pair of a complexified real atom `R` splits
    /// as `R ⊕ R`; other pairs keep the canonical member of `{F, σ*F̄}`.
    fn normalized(&self) -> Result<Vec<RealAtom>, BundleError> {
        match self {
            RealAtom::ConjPair(f) => Ok(match f.real_form()? {
                Some(real) => vec![real.clone(), real],
                None => vec![RealAtom::ConjPair(f.conj_class_rep())],
            }),
            other => Ok(vec![other.clone()]),
        }
    }
}

impl fmt::Display for RealAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealAtom::RealLine(l) => write!(f, "RealLine{l}"),
            RealAtom::SelfExt(xi) => write!(f, "W{xi}"),
            RealAtom::RealStable { rank, degree, key } => write!(f, "RealStable(r={rank}, d={degree}, key={key})"),
            RealAtom::ConjPair(c) => write!(f, "V[{c}]"),
        }
    }
}

/// A direct sum of atoms of one flavor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BundleDesc {
    Real(Vec<RealAtom>),
    Complex(Vec<ComplexAtom>),
}

/// Stability type of a direct sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    Stable,
    PolystableNotStable,
    SemistableNotPolystable,
    Unstable,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "Stable",
            Stability::PolystableNotStable => "PolystableNotStable",
            Stability::SemistableNotPolystable => "SemistableNotPolystable",
            Stability::Unstable => "Unstable",
        })
    }
}

impl BundleDesc {
    pub fn flavor(&self) -> Flavor {
        match self {
            BundleDesc::Real(_) => Flavor::Real,
            BundleDesc::Complex(_) => Flavor::Complex,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            BundleDesc::Real(a) => a.len(),
            BundleDesc::Complex(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rank(&self) -> u32 {
        match self {
            BundleDesc::Real(a) => a.iter().map(RealAtom::rank).sum(),
            BundleDesc::Complex(a) => a.iter().map(ComplexAtom::rank).sum(),
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            BundleDesc::Real(a) => a.iter().map(RealAtom::degree).sum(),
            BundleDesc::Complex(a) => a.iter().map(ComplexAtom::degree).sum(),
        }
    }

    pub fn slope(&self) -> Result<Rational, BundleError> {
        if self.is_empty() {
            return Err(BundleError::Empty);
        }
        Ok(Rational::new(self.degree(), i64::from(self.rank())))
    }

    fn atom_slopes(&self) -> Vec<Rational> {
        match self {
            BundleDesc::Real(a) => a.iter().map(RealAtom::slope).collect(),
            BundleDesc::Complex(a) => a.iter().map(ComplexAtom::slope).collect(),
        }
    }

    fn atom_stability(&self) -> Vec<bool> {
        match self {
            BundleDesc::Real(a) => a.iter().map(RealAtom::is_stable).collect(),
            BundleDesc::Complex(a) => a.iter().map(ComplexAtom::is_stable).collect(),
        }
    }

    /// `D ⊗ M` for a real line bundle `M` (either flavor).
    pub fn tensor_real_line(&self, m: &ExactLineBundle) -> Result<Self, BundleError> {
        Ok(match self {
            BundleDesc::Real(atoms) => BundleDesc::Real(
                atoms
                    .iter()
                    .map(|a| a.tensor_real_line(m))
                    .collect::<Result<_, _>>()?,
            ),
            BundleDesc::Complex(atoms) => {
                require_real(m)?;
                BundleDesc::Complex(atoms.iter().map(|a| a.tensor_line(m)).collect())
            }
        })
    }
}

impl fmt::Display for BundleDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            BundleDesc::Real(a) => a.iter().map(ToString::to_string).collect(),
            BundleDesc::Complex(a) => a.iter().map(ToString::to_string).collect(),
        };
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `degree / rank`, exactly.
pub fn slope(d: &BundleDesc) -> Result<Rational, BundleError> {
    d.slope()
}

/// Canonical form: conjugate pairs of complexified real atoms are split,
/// remaining pairs use their canonical member, and atoms are sorted.
/// Idempotent; preserves rank, degree and isomorphism class.
pub fn normalize_desc(d: &BundleDesc) -> Result<BundleDesc, BundleError> {
    Ok(match d {
        BundleDesc::Real(atoms) => {
            let mut out = Vec::with_capacity(atoms.len());
            for a in atoms {
                out.extend(a.normalized()?);
            }
            out.sort();
            BundleDesc::Real(out)
        }
        BundleDesc::Complex(atoms) => {
            let mut out = atoms.clone();
            out.sort();
            BundleDesc::Complex(out)
        }
    })
}

/// Stability type of a (normalised or not) descriptor.
pub fn stability(d: &BundleDesc) -> Result<Stability, BundleError> {
    if d.is_empty() {
        return Err(BundleError::Empty);
    }
    let d = normalize_desc(d)?;
    let slopes = d.atom_slopes();
    if slopes.iter().any(|s| *s != slopes[0]) {
        return Ok(Stability::Unstable);
    }
    let stable = d.atom_stability();
    Ok(if stable.iter().any(|s| !s) {
        Stability::SemistableNotPolystable
    } else if stable.len() == 1 {
        Stability::Stable
    } else {
        Stability::PolystableNotStable
    })
}

/// Isomorphism of direct sums. Real atoms match by exact key; a conjugate
/// pair `F ⊕ σ*F̄` matches `G ⊕ σ*Ḡ` iff `F ≅ G` or `F ≅ σ*Ḡ`.
pub fn is_isomorphic(d1: &BundleDesc, d2: &BundleDesc) -> Result<bool, BundleError> {
    if d1.flavor() != d2.flavor() {
        return Err(BundleError::MixedFlavor);
    }
    let n1 = normalize_desc(d1)?;
    let n2 = normalize_desc(d2)?;
    if n1.len() != n2.len() {
        return Ok(false);
    }
    Ok(match (n1, n2) {
        (BundleDesc::Real(a), BundleDesc::Real(b)) => match_multisets(&a, &b, real_atoms_isomorphic),
        (BundleDesc::Complex(a), BundleDesc::Complex(b)) => match_multisets(&a, &b, |x, y| x == y),
        _ => unreachable!("flavors checked above"),
    })
}

fn real_atoms_isomorphic(x: &RealAtom, y: &RealAtom) -> bool {
    match (x, y) {
        (RealAtom::ConjPair(f), RealAtom::ConjPair(g)) => f == g || *f == g.conj(),
        _ => x == y,
    }
}

/// Greedy matching; `iso` is an equivalence relation on atoms, so any
/// maximal matching is perfect iff the multisets agree.
fn match_multisets<T>(a: &[T], b: &[T], iso: impl Fn(&T, &T) -> bool) -> bool {
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        match (0..b.len()).find(|&j| !used[j] && iso(x, &b[j])) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// `E ⊗_ℝ ℂ`. Rank and degree are preserved.
pub fn complexify(d: &BundleDesc) -> Result<BundleDesc, BundleError> {
    match d {
        BundleDesc::Real(atoms) => Ok(BundleDesc::Complex(
            atoms.iter().flat_map(RealAtom::complexify).collect(),
        )),
        BundleDesc::Complex(_) => Err(BundleError::WrongFlavor { expected: Flavor::Real }),
    }
}

/// Strata of real rank-2 bundles of degree 0 or 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "stratum", deny_unknown_fields)]
pub enum Rank2Stratum {
    /// `V(L)`, `deg L = 1`; `line` is the canonical member of `{L, σ*L̄}`.
    Stable22 { line: ExactLineBundle },
    /// `V(L)`, `deg L = 0`, `L` not real; canonical member of `{L, σ*L̄}`.
    Stable20 { line: ExactLineBundle },
    /// `ξ₁ ⊕ ξ₂` with both of degree 0; sorted real-circle coordinates.
    PolyNotStable {
        #[serde(with = "rational_str::pair")]
        points: [Rational; 2],
    },
    /// `W(ξ)`, `deg ξ = 0`.
    SelfExtStratum {
        #[serde(with = "rational_str")]
        point: Rational,
    },
    /// `ξ₁ ⊕ ξ₂` with different degrees.
    SplitUnstable { lines: [ExactLineBundle; 2] },
}

impl Rank2Stratum {
    pub fn name(&self) -> &'static str {
        match self {
            Rank2Stratum::Stable22 { .. } => "Stable22",
            Rank2Stratum::Stable20 { .. } => "Stable20",
            Rank2Stratum::PolyNotStable { .. } => "PolyNotStable",
            Rank2Stratum::SelfExtStratum { .. } => "SelfExtStratum",
            Rank2Stratum::SplitUnstable { .. } => "SplitUnstable",
        }
    }
}

/// Result of [`classify_rank2`]: the input is `reduced ⊗ O(D)^{⊗twist}`
/// with `D = 0̲ + σ(0̲)`, and `stratum` describes `reduced`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rank2Class {
    pub twist: i64,
    pub stratum: Rank2Stratum,
}

/// Classify a real rank-2 descriptor after reducing its degree to 0 or 2 by
/// an even real twist.
pub fn classify_rank2(d: &BundleDesc) -> Result<Rank2Class, BundleError> {
    if d.flavor() != Flavor::Real {
        return Err(BundleError::WrongFlavor { expected: Flavor::Real });
    }
    if d.rank() != 2 {
        return Err(BundleError::NotRank2(d.rank()));
    }
    let degree = d.degree();
    if degree % 2 != 0 {
        return Err(BundleError::OddDegree(degree));
    }
    let twist = degree.div_euclid(4);
    let untwist = ExactLineBundle::real_reference(twist).dual();
    let reduced = normalize_desc(&d.tensor_real_line(&untwist)?)?;
    let atoms = match reduced {
        BundleDesc::Real(a) => a,
        BundleDesc::Complex(_) => unreachable!("tensoring keeps the flavor"),
    };
    let stratum = match atoms.as_slice() {
        [RealAtom::ConjPair(ComplexAtom::Line(l))] => {
            let line = l.clone();
            if l.degree() == 1 {
                Rank2Stratum::Stable22 { line }
            } else {
                Rank2Stratum::Stable20 { line }
            }
        }
        [RealAtom::SelfExt(xi)] => Rank2Stratum::SelfExtStratum { point: *xi.point().a() },
        [RealAtom::RealLine(l1), RealAtom::RealLine(l2)] => {
            if l1.degree() == l2.degree() {
                let mut points = [*l1.point().a(), *l2.point().a()];
                points.sort();
                Rank2Stratum::PolyNotStable { points }
            } else {
                Rank2Stratum::SplitUnstable {
                    lines: [l1.clone(), l2.clone()],
                }
            }
        }
        // rank 2 real atoms are exhausted above: RealStable of rank 2 would
        // need odd degree, and ConjPair of anything but a line has rank >= 4
        other => unreachable!("unexpected rank-2 normal form {other:?}"),
    };
    Ok(Rank2Class { twist, stratum })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn lb(d: i64, a: (i64, i64), b: (i64, i64)) -> ExactLineBundle {
        ExactLineBundle::new(d, ExactPoint::exact(a, b))
    }

    fn real_line(d: i64, a: (i64, i64)) -> RealAtom {
        RealAtom::real_line(lb(d, a, (0, 1))).unwrap()
    }

    fn v(l: ExactLineBundle) -> BundleDesc {
        BundleDesc::Real(vec![RealAtom::ConjPair(ComplexAtom::Line(l))])
    }

    fn w(a: (i64, i64)) -> BundleDesc {
        BundleDesc::Real(vec![RealAtom::self_ext(lb(0, a, (0, 1))).unwrap()])
    }

    #[test]
    fn slope_examples() {
        let d = BundleDesc::Real(vec![real_line(0, (1, 5)), real_line(2, (1, 2))]);
        assert_eq!(slope(&d), Ok(q(1, 1)));
        assert_eq!(slope(&w((1, 10))), Ok(q(0, 1)));
        let f = ComplexAtom::stable(3, 2, ExactPoint::exact((1, 7), (1, 9))).unwrap();
        let pair = BundleDesc::Real(vec![RealAtom::ConjPair(f)]);
        assert_eq!(pair.rank(), 6);
        assert_eq!(pair.degree(), 4);
        assert_eq!(slope(&pair), Ok(q(2, 3)));
        assert_eq!(slope(&BundleDesc::Real(vec![])), Err(BundleError::Empty));
    }

    #[test]
    fn stability_examples() {
        assert_eq!(stability(&v(lb(0, (3, 10), (1, 4)))), Ok(Stability::Stable));
        let poly = BundleDesc::Real(vec![real_line(0, (1, 5)), real_line(0, (7, 10))]);
        assert_eq!(stability(&poly), Ok(Stability::PolystableNotStable));
        assert_eq!(stability(&w((1, 10))), Ok(Stability::SemistableNotPolystable));
        let unstable = BundleDesc::Real(vec![
            real_line(0, (0, 1)),
            RealAtom::real_stable(1, 2, q(1, 3)).unwrap(),
        ]);
        assert_eq!(stability(&unstable), Ok(Stability::Unstable));
        assert_eq!(stability(&BundleDesc::Complex(vec![])), Err(BundleError::Empty));
    }

    #[test]
    fn conj_pair_of_real_line_is_polystable() {
        let d = v(lb(0, (3, 10), (0, 1)));
        assert_eq!(stability(&d), Ok(Stability::PolystableNotStable));
        // fixed but obstructed stays stable
        assert_eq!(stability(&v(lb(0, (3, 10), (1, 2)))), Ok(Stability::Stable));
        // degree one: always stable
        assert_eq!(stability(&v(lb(1, (1, 5), (3, 10)))), Ok(Stability::Stable));
    }

    #[test]
    fn normalize_examples() {
        let d = v(lb(0, (3, 10), (0, 1)));
        let expected = BundleDesc::Real(vec![real_line(0, (3, 10)), real_line(0, (3, 10))]);
        assert_eq!(normalize_desc(&d), Ok(expected.clone()));
        assert_eq!(normalize_desc(&expected), Ok(expected));
        let obstructed = v(lb(0, (3, 10), (1, 2)));
        assert_eq!(normalize_desc(&obstructed), Ok(obstructed));
    }

    #[test]
    fn isomorphism_examples() {
        let l = lb(1, (1, 5), (3, 10));
        assert_eq!(is_isomorphic(&v(l.clone()), &v(l.sigma_conj())), Ok(true));
        assert_eq!(is_isomorphic(&w((1, 10)), &w((1, 5))), Ok(false));
        let a = real_line(0, (1, 10));
        let b = real_line(0, (3, 5));
        let ab = BundleDesc::Real(vec![a.clone(), b.clone()]);
        let ba = BundleDesc::Real(vec![b, a]);
        assert_eq!(is_isomorphic(&ab, &ba), Ok(true));
        assert_eq!(
            is_isomorphic(&ab, &complexify(&ab).unwrap()),
            Err(BundleError::MixedFlavor)
        );
    }

    #[test]
    fn complexify_examples() {
        let stable = BundleDesc::Real(vec![RealAtom::real_stable(3, 2, q(1, 15)).unwrap()]);
        assert_eq!(
            complexify(&stable),
            Ok(BundleDesc::Complex(vec![ComplexAtom::Stable {
                rank: 3,
                degree: 2,
                key: ExactPoint::exact((1, 15), (0, 1)),
            }]))
        );

        let p = ExactPoint::exact((1, 8), (1, 3));
        let f = ComplexAtom::stable(2, 1, p.clone()).unwrap();
        let out = complexify(&BundleDesc::Real(vec![RealAtom::ConjPair(f.clone())])).unwrap();
        assert_eq!(out, BundleDesc::Complex(vec![f.clone(), f.conj()]));
        // conjugation on a (2, 1) key: (a + 1/4, -b) mod 1/2
        assert_eq!(f.conj(), ComplexAtom::Stable { rank: 2, degree: 1, key: ExactPoint::exact((3, 8), (1, 6)) });

        let lines = BundleDesc::Real(vec![real_line(0, (1, 3)), real_line(2, (1, 4))]);
        let c = complexify(&lines).unwrap();
        assert_eq!(c.rank(), 2);
        assert_eq!(c.degree(), 2);
        assert!(matches!(c, BundleDesc::Complex(ref a) if a.iter().all(|x| matches!(x, ComplexAtom::Line(_)))));
        assert_eq!(complexify(&c), Err(BundleError::WrongFlavor { expected: Flavor::Real }));
    }

    #[test]
    fn classify_rank2_examples() {
        let l = lb(1, (1, 5), (3, 10));
        assert_eq!(
            classify_rank2(&v(l)),
            Ok(Rank2Class { twist: 0, stratum: Rank2Stratum::Stable22 { line: lb(1, (1, 5), (3, 10)) } })
        );
        // the other member of the orbit lands on the same key
        assert_eq!(
            classify_rank2(&v(lb(1, (7, 10), (7, 10)))).unwrap().stratum,
            Rank2Stratum::Stable22 { line: lb(1, (1, 5), (3, 10)) }
        );
        assert_eq!(
            classify_rank2(&w((2, 5))),
            Ok(Rank2Class { twist: 0, stratum: Rank2Stratum::SelfExtStratum { point: q(2, 5) } })
        );
        let poly = BundleDesc::Real(vec![real_line(0, (3, 5)), real_line(0, (1, 10))]);
        assert_eq!(
            classify_rank2(&poly).unwrap().stratum,
            Rank2Stratum::PolyNotStable { points: [q(1, 10), q(3, 5)] }
        );
        let s20 = classify_rank2(&v(lb(0, (1, 3), (3, 4)))).unwrap();
        assert_eq!(s20.stratum, Rank2Stratum::Stable20 { line: lb(0, (1, 3), (1, 4)) });
        let split = BundleDesc::Real(vec![real_line(-2, (0, 1)), real_line(2, (0, 1))]);
        assert!(matches!(classify_rank2(&split).unwrap().stratum, Rank2Stratum::SplitUnstable { .. }));
    }

    #[test]
    fn classify_rank2_twists_high_degree() {
        // V(L) with deg L = 3 is V(L ⊗ O(-D)) ⊗ O(D)
        let l = lb(3, (1, 7), (2, 7));
        let class = classify_rank2(&v(l.clone())).unwrap();
        assert_eq!(class.twist, 1);
        let expected = l.tensor(&ExactLineBundle::real_reference(-1));
        assert_eq!(expected.degree(), 1);
        let Rank2Stratum::Stable22 { line } = class.stratum else { panic!("expected Stable22") };
        assert!(line == expected || line == expected.sigma_conj());

        let neg = classify_rank2(&w((1, 3)).tensor_real_line(&ExactLineBundle::real_reference(-3)).unwrap()).unwrap();
        assert_eq!(neg.twist, -3);
        assert_eq!(neg.stratum, Rank2Stratum::SelfExtStratum { point: q(1, 3) });
    }

    #[test]
    fn classify_rank2_errors() {
        let rank3 = BundleDesc::Real(vec![real_line(0, (0, 1)), real_line(0, (0, 1)), real_line(0, (0, 1))]);
        assert_eq!(classify_rank2(&rank3), Err(BundleError::NotRank2(3)));
        let complex = BundleDesc::Complex(vec![ComplexAtom::Line(lb(1, (0, 1), (0, 1))); 2]);
        assert!(matches!(classify_rank2(&complex), Err(BundleError::WrongFlavor { .. })));
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(RealAtom::real_line(lb(0, (1, 3), (1, 2))), Err(BundleError::NotReal(_))));
        assert!(matches!(RealAtom::real_line(lb(1, (0, 1), (0, 1))), Err(BundleError::NotReal(_))));
        assert!(matches!(RealAtom::self_ext(lb(0, (1, 3), (1, 7))), Err(BundleError::NotReal(_))));
        assert_eq!(RealAtom::real_stable(3, 1, q(0, 1)), Err(BundleError::OddDegree(1)));
        assert_eq!(RealAtom::real_stable(4, 2, q(0, 1)), Err(BundleError::NotCoprime { rank: 4, degree: 2 }));
        assert_eq!(RealAtom::real_stable(0, 2, q(0, 1)), Err(BundleError::ZeroRank));
        assert_eq!(
            ComplexAtom::stable(2, 0, ExactPoint::origin()),
            Err(BundleError::NotCoprime { rank: 2, degree: 0 })
        );
        assert_eq!(ComplexAtom::self_extension(3, lb(0, (0, 1), (0, 1))), Err(BundleError::NotClassified(3)));
        // rank one collapses to line atoms
        assert_eq!(
            ComplexAtom::stable(1, 5, ExactPoint::exact((1, 3), (1, 4))),
            Ok(ComplexAtom::Line(lb(5, (1, 3), (1, 4))))
        );
        assert_eq!(RealAtom::real_stable(1, 2, q(4, 3)), Ok(real_line(2, (1, 3))));
        // keys reduce modulo 1/rank
        assert_eq!(
            RealAtom::real_stable(3, 2, q(2, 5)),
            Ok(RealAtom::RealStable { rank: 3, degree: 2, key: q(1, 15) })
        );
    }

    #[test]
    fn stable_atom_tensor_is_conj_equivariant() {
        let f = ComplexAtom::stable(3, 2, ExactPoint::exact((1, 11), (2, 13))).unwrap();
        let m = lb(1, (2, 7), (1, 5));
        assert_eq!(f.tensor_line(&m).conj(), f.conj().tensor_line(&m.sigma_conj()));
        assert_eq!(f.conj().conj(), f);
    }
}
