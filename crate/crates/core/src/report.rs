//! Documents emitted by the command-line front end.
//!
//! Each document is a plain serde type with strict parsing, so anything the
//! CLI prints with `--json` can be read back with [`parse`].

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bundles::{Rank2Stratum, Stability};
use crate::holonomy::Integrator;
use crate::moduli::LocusTag;
use crate::picard::FixedClassKind;
use crate::scalar::Rational;
use crate::wire::rational_str;
use crate::{BundleDesc, ExactLineBundle, ExactPoint, FloatLineBundle, ModuliDesc, RealAtom, StableClassKey};

pub fn parse<T: DeserializeOwned>(json: &str) -> Result<T, serde_json::Error> {
    serde_json::from_str(json)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

/// A line bundle in whichever backing the command ran with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LineDoc {
    Exact(ExactLineBundle),
    Float(FloatLineBundle),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineClassifyReport {
    pub line: LineDoc,
    pub class: FixedClassKind,
    /// `+1` or `−1` for fixed classes.
    pub obstruction: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrated_holonomy: Option<ComplexDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionReport {
    pub r: u32,
    pub real_only: bool,
    pub order: usize,
    pub elements: Vec<ExactPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyReport {
    pub tau: f64,
    pub z0: ComplexDoc,
    pub path: String,
    pub integrator: Integrator,
    pub steps: usize,
    pub holonomy: ComplexDoc,
    pub closed_form: ComplexDoc,
    pub error: f64,
    pub tol: f64,
    pub within_tol: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rank2Report {
    pub input: BundleDesc,
    pub stability: Stability,
    pub twist: i64,
    pub reduced: Rank2Stratum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoReport {
    pub isomorphic: bool,
    pub left: BundleDesc,
    pub right: BundleDesc,
    pub left_normal: BundleDesc,
    pub right_normal: BundleDesc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyReport {
    pub moduli: ModuliDesc,
    pub key: StableClassKey,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructReport {
    pub r: u32,
    pub d: i64,
    #[serde(with = "rational_str")]
    pub t: Rational,
    pub atom: RealAtom,
    pub key: StableClassKey,
    /// Periods of the covering lattice; the second in units of `τ`.
    pub cover_lattice: [i64; 2],
    pub covering_degree: u32,
    pub cover_tau: f64,
    #[serde(with = "rational_str")]
    pub cover_involution_shift: Rational,
    pub source: ExactLineBundle,
    pub source_class: FixedClassKind,
    pub source_sign: i32,
    pub determinant: ExactLineBundle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleDoc {
    pub tag: LocusTag,
    #[serde(with = "rational_str")]
    pub b: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointDoc {
    pub point: ExactPoint,
    pub tag: LocusTag,
    pub lift: ExactLineBundle,
    pub sign: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedLocusReport {
    pub r: u32,
    #[serde(with = "rational_str")]
    pub side: Rational,
    pub circles: Vec<CircleDoc>,
    pub points: Vec<FixedPointDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotReport {
    pub svg: String,
    pub csv: String,
    pub svg_bytes: usize,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorDoc {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorReport {
    pub error: ErrorDoc,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::classify_rank2;
    use crate::moduli::moduli_descriptor;

    #[test]
    fn line_doc_keeps_backing() {
        let exact = LineClassifyReport {
            line: LineDoc::Exact(ExactLineBundle::new(0, ExactPoint::exact((3, 10), (1, 2)))),
            class: FixedClassKind::FixedNotReal,
            obstruction: Some(-1),
            integrated_holonomy: None,
        };
        let json = serde_json::to_string(&exact).unwrap();
        assert_eq!(parse::<LineClassifyReport>(&json).unwrap(), exact);

        let float = LineClassifyReport {
            line: LineDoc::Float(FloatLineBundle::new(2, crate::FloatPoint::new(0.3, 0.0).unwrap())),
            class: FixedClassKind::RealizableReal,
            obstruction: Some(1),
            integrated_holonomy: Some(ComplexDoc { re: 1.0, im: 0.0 }),
        };
        let json = serde_json::to_string(&float).unwrap();
        assert_eq!(parse::<LineClassifyReport>(&json).unwrap(), float);
    }

    #[test]
    fn rank2_report_round_trip() {
        let input: BundleDesc = r#"{"flavor":"real","atoms":[{"kind":"real_line","line":{"degree":0,"a":"3/5","b":"0"}},{"kind":"real_line","line":{"degree":0,"a":"1/10","b":"0"}}]}"#.parse().unwrap();
        let class = classify_rank2(&input).unwrap();
        let report = Rank2Report {
            input: input.clone(),
            stability: Stability::PolystableNotStable,
            twist: class.twist,
            reduced: class.stratum,
        };
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains(r#""reduced":{"stratum":"PolyNotStable","points":["1/10","3/5"]}"#));
        assert_eq!(parse::<Rank2Report>(&json).unwrap(), report);
        assert!(parse::<Rank2Report>(&json.replace("\"twist\"", "\"twist_\"")).is_err());
    }

    #[test]
    fn key_report_round_trip() {
        let moduli = moduli_descriptor(2, 2).unwrap();
        let key = crate::moduli::canonical_key(2, 2, &ExactPoint::exact((1, 5), (3, 10))).unwrap();
        let report = KeyReport { moduli, key };
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(parse::<KeyReport>(&json).unwrap(), report);
    }
}
