use std::fs;

use klein_core::moduli::MAX_SNAP_DENOM;
use klein_core::scalar::snap_to_rational;
use klein_core::wire::{format_rational, parse_rational};
use klein_core::{BundleDesc, Rational};
use num_complex::Complex64;

use crate::error::CliError;

/// Exact coordinate from a CLI literal. `p/q` and integers are exact; other
/// numbers are snapped to the nearest rational with small denominator and a
/// warning goes to stderr.
pub fn exact(flag: &str, raw: &str) -> Result<Rational, CliError> {
    let looks_exact = raw.contains('/') || raw.trim().parse::<i64>().is_ok();
    if looks_exact {
        return parse_rational(raw).map_err(|e| CliError::Usage(format!("--{flag}: {e}")));
    }
    let x = float(flag, raw)?;
    let q = snap_to_rational(x, MAX_SNAP_DENOM).ok_or_else(|| CliError::Usage(format!("--{flag}: cannot snap {raw}")))?;
    eprintln!("warning: --{flag} {raw} snapped to {}", format_rational(&q));
    Ok(q)
}

/// Float coordinate; `p/q` literals are accepted too.
pub fn float(flag: &str, raw: &str) -> Result<f64, CliError> {
    let x = if raw.contains('/') {
        let q = parse_rational(raw).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))?;
        *q.numer() as f64 / *q.denom() as f64
    } else {
        raw.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--{flag}: invalid number {raw:?}")))?
    };
    if !x.is_finite() {
        return Err(CliError::Usage(format!("--{flag}: {raw} is not finite")));
    }
    Ok(x)
}

/// `a+bi` style literal.
pub fn complex(flag: &str, raw: &str) -> Result<Complex64, CliError> {
    let z: Complex64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: invalid complex number {raw:?} (expected e.g. 0.5+1i)")))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(CliError::Usage(format!("--{flag}: {raw} is not finite")));
    }
    Ok(z)
}

/// A descriptor given inline or as `@path`.
pub fn descriptor(flag: &str, raw: &str) -> Result<BundleDesc, CliError> {
    let text = match raw.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Usage(format!("--{flag}: {path}: {e}")))?,
        None => raw.to_string(),
    };
    text.parse::<BundleDesc>()
        .map_err(|e| CliError::Usage(format!("--{flag}: invalid descriptor: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(exact("a", "3/10").unwrap(), Rational::new(3, 10));
        assert_eq!(exact("a", "-2").unwrap(), Rational::from_integer(-2));
        assert_eq!(exact("a", "0.25").unwrap(), Rational::new(1, 4));
        assert!(matches!(exact("a", "x"), Err(CliError::Usage(_))));
        assert_eq!(float("b", "1/4").unwrap(), 0.25);
        assert!(float("b", "inf").is_err());
        assert_eq!(complex("z0", "0+1i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(complex("z0", "0.5-0.25i").unwrap(), Complex64::new(0.5, -0.25));
        assert!(complex("z0", "1+").is_err());
    }
}
