use klein_core::bundles::BundleError;
use klein_core::holonomy::HolonomyError;
use klein_core::moduli::ModuliError;
use klein_core::picard::PicardError;
use klein_core::report::{ErrorDoc, ErrorReport};
use klein_core::torus::TorusError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{message}")]
    Domain { kind: &'static str, message: String },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain { kind, .. } => kind,
            CliError::Io(_) => "io",
        }
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            error: ErrorDoc {
                kind: self.kind().to_string(),
                message: self.to_string(),
                exit_code: self.exit_code(),
            },
        }
    }

    fn domain(kind: &'static str, err: impl std::fmt::Display) -> Self {
        CliError::Domain {
            kind,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("invalid JSON: {e}"))
    }
}

impl From<TorusError> for CliError {
    fn from(e: TorusError) -> Self {
        match e {
            TorusError::InvalidModulus(_) => CliError::Usage(e.to_string()),
            TorusError::NonFinite(..) => CliError::Usage(e.to_string()),
            TorusError::NonStandardConvention => CliError::domain("non_standard_convention", e),
        }
    }
}

impl From<PicardError> for CliError {
    fn from(e: PicardError) -> Self {
        let kind = match e {
            PicardError::Ambiguous(_) => "ambiguous",
            PicardError::ZeroOrder => "zero_order",
            PicardError::OddDegree(_) => "odd_degree",
        };
        CliError::domain(kind, e)
    }
}

impl From<HolonomyError> for CliError {
    fn from(e: HolonomyError) -> Self {
        match e {
            HolonomyError::Picard(p) => p.into(),
            HolonomyError::InvalidModulus | HolonomyError::NonFiniteParameter | HolonomyError::ZeroSteps => {
                CliError::Usage(e.to_string())
            }
            HolonomyError::NotFixed => CliError::domain("not_fixed", e),
            HolonomyError::IndeterminateSign { .. } => CliError::domain("indeterminate_sign", e),
        }
    }
}

impl From<BundleError> for CliError {
    fn from(e: BundleError) -> Self {
        let kind = match e {
            BundleError::Picard(p) => return p.into(),
            BundleError::NotReal(_) => "not_real",
            BundleError::NotCoprime { .. } => "not_coprime",
            BundleError::OddDegree(_) => "odd_degree",
            BundleError::ZeroRank => "zero_rank",
            BundleError::NotClassified(_) => "not_classified",
            BundleError::Empty => "empty",
            BundleError::MixedFlavor => "mixed_flavor",
            BundleError::WrongFlavor { .. } => "wrong_flavor",
            BundleError::NotRank2(_) => "not_rank2",
        };
        CliError::domain(kind, e)
    }
}

impl From<ModuliError> for CliError {
    fn from(e: ModuliError) -> Self {
        let kind = match e {
            ModuliError::Bundle(b) => return b.into(),
            ModuliError::ZeroRank => "zero_rank",
            ModuliError::NoStableBundles { .. } => "no_stable_bundles",
            ModuliError::OffRealCircle { .. } => "off_real_circle",
            ModuliError::ExcludedRealLocus { .. } => "excluded_locus",
            ModuliError::Ambiguous { .. } => "ambiguous",
            ModuliError::NonFinite(_) => "non_finite",
            ModuliError::EvenRank(_) => "even_rank",
            ModuliError::NotStable(_) => "not_stable",
        };
        CliError::domain(kind, e)
    }
}
