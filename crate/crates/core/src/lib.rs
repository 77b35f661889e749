//! Real algebraic line and vector bundles on Klein bottles.
//!
//! A Klein bottle here is the complex torus `Y_τ = ℂ/⟨1, iτ⟩` with the
//! fixed-point-free anti-holomorphic involution `σ(z) = z̄ + 1/2`. The crate
//! provides
//!
//! * [`torus`]: canonical coordinates on `Y_τ` and the normal form of the
//!   real structure,
//! * [`picard`]: line bundle classes of every degree, the involutions
//!   `σ_d`, the fixed/real trichotomy and torsion subgroups,
//! * [`holonomy`]: flat connections, numerical parallel transport and the
//!   realness obstruction sign,
//! * [`bundles`]: a descriptor algebra for real and complex bundles built
//!   from indecomposable atoms, with stability, isomorphism testing and the
//!   rank-2 classification,
//! * [`moduli`]: moduli descriptors and canonical keys for stable real
//!   bundles of every rank and degree.
//!
//! Coordinates are generic over [`Scalar`]; classification and keying work
//! on the exact [`Rational`] backing.

pub mod bundles;
pub mod holonomy;
pub mod moduli;
pub mod picard;
pub mod report;
pub mod scalar;
pub mod torus;
pub mod wire;

pub use bundles::{BundleDesc, BundleError, ComplexAtom, Flavor, RealAtom, Stability};
pub use holonomy::{FlatConnection, HolonomyError, Integrator, PathKind, PathSpec, Sign};
pub use moduli::{ModuliDesc, ModuliError, ModuliKind, StableClassKey};
pub use picard::{FixedClassKind, LineBundleClass, PicardError, TorsionSubgroup};
pub use scalar::{Backing, Proximity, Rational, Scalar};
pub use torus::{Convention, KleinBottle, NormalFormMap, TorusError, TorusPoint};

/// Torus point with exact rational coordinates.
pub type ExactPoint = TorusPoint<Rational>;
/// Torus point with `f64` coordinates.
pub type FloatPoint = TorusPoint<f64>;
/// Line bundle class with exact rational coordinates.
pub type ExactLineBundle = LineBundleClass<Rational>;
/// Line bundle class with `f64` coordinates.
pub type FloatLineBundle = LineBundleClass<f64>;
/// Double-precision flat connection.
pub type Connection64 = FlatConnection<f64>;
