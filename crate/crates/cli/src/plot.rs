//! Fundamental-domain plot: an SVG drawing and a CSV of the same points.

use std::fmt::Write as _;
use std::path::Path;

use klein_core::picard::torsion_subgroup;
use klein_core::{Rational, Scalar};

use crate::error::CliError;

/// Ranks above this would push the SVG past its size budget.
pub const MAX_PLOT_RANK: u32 = 24;

const CANVAS: f64 = 400.0;
const CIRCLE_SAMPLES: i64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub a: f64,
    pub b: f64,
    pub tag: &'static str,
}

pub struct Plot {
    pub svg: String,
    pub rows: Vec<Row>,
}

/// Points and curves of the plot, in `(a, b)` coordinates.
pub fn rows(d: i64, r: u32) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    let side = Rational::new(1, i64::from(r));
    for (ra, rb) in [(0, 0), (1, 0), (1, 1), (0, 1)] {
        rows.push(Row {
            a: (side * ra).to_f64(),
            b: (side * rb).to_f64(),
            tag: "cell",
        });
    }
    let gamma = torsion_subgroup(r, false)?;
    for p in gamma.elements() {
        rows.push(Row {
            a: p.a().to_f64(),
            b: p.b().to_f64(),
            tag: if p.b() == &Rational::from_integer(0) {
                "torsion_real"
            } else {
                "torsion"
            },
        });
    }
    // σ_d-fixed classes exist only in even degree: b = 0 real, b = 1/2 obstructed
    if d % 2 == 0 {
        for (b, tag) in [(0.0, "fixed_real"), (0.5, "fixed_obstructed")] {
            for k in 0..CIRCLE_SAMPLES {
                rows.push(Row {
                    a: k as f64 / CIRCLE_SAMPLES as f64,
                    b,
                    tag,
                });
            }
        }
    }
    Ok(rows)
}

fn scale(tau: f64) -> (f64, f64) {
    let m = tau.max(1.0);
    (CANVAS / m, CANVAS * tau / m)
}

pub fn render(d: i64, r: u32, tau: f64) -> Result<Plot, CliError> {
    if r == 0 || r > MAX_PLOT_RANK {
        return Err(CliError::Usage(format!("--r must be between 1 and {MAX_PLOT_RANK}")));
    }
    let rows = rows(d, r)?;
    let (w, h) = scale(tau);
    let pad = 10.0;
    // b grows upwards
    let x = |a: f64| pad + a * w;
    let y = |b: f64| pad + (1.0 - b) * h;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.1}" height="{:.1}" viewBox="0 0 {:.1} {:.1}">"#,
        w + 2.0 * pad,
        h + 2.0 * pad,
        w + 2.0 * pad,
        h + 2.0 * pad
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000" stroke-width="1"/>"##,
        x(0.0),
        y(1.0),
        w,
        h
    );
    let side = 1.0 / f64::from(r);
    let _ = writeln!(
        svg,
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4a7bd0" fill-opacity="0.15" stroke="#4a7bd0" stroke-width="1"/>"##,
        x(0.0),
        y(side),
        side * w,
        side * h
    );
    if d % 2 == 0 {
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#2a9d3a" stroke-width="2"/>"##,
            x(0.0),
            y(0.0),
            x(1.0),
            y(0.0)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#c0392b" stroke-width="2" stroke-dasharray="6 4"/>"##,
            x(0.0),
            y(0.5),
            x(1.0),
            y(0.5)
        );
    }
    for row in rows.iter().filter(|r| r.tag.starts_with("torsion")) {
        let fill = if row.tag == "torsion_real" { "#2a9d3a" } else { "#333" };
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{fill}"/>"#,
            x(row.a),
            y(row.b)
        );
    }
    svg.push_str("</svg>\n");
    Ok(Plot { svg, rows })
}

pub fn write_csv(path: &Path, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(e.to_string()))?;
    w.write_record(["a", "b", "tag"]).map_err(|e| CliError::Io(e.to_string()))?;
    for row in rows {
        w.write_record([row.a.to_string(), row.b.to_string(), row.tag.to_string()])
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
