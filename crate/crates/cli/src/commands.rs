use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use klein_core::bundles::{classify_rank2, is_isomorphic, normalize_desc, stability, Rank2Stratum};
use klein_core::holonomy::{integrated_composition, parallel_transport_with, realness_sign};
use klein_core::moduli::{
    canonical_key, canonical_key_float, construct_stable_real, fixed_locus_delta, moduli_descriptor, KeyValue,
    Parametrization,
};
use klein_core::picard::{torsion_subgroup, FixedClassKind};
use klein_core::report::{
    CircleDoc, ComplexDoc, ConstructReport, FixedLocusReport, FixedPointDoc, HolonomyReport, IsoReport, KeyReport,
    LineClassifyReport, LineDoc, PlotReport, Rank2Report, TorsionReport,
};
use klein_core::{
    Connection64, ExactLineBundle, ExactPoint, FloatLineBundle, FloatPoint, Integrator, KleinBottle, LineBundleClass,
    ModuliDesc, PathSpec, Rational, Scalar,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::CliError;
use crate::input;
use crate::plot;

/// What a command prints: a text rendering and a JSON document.
pub struct Output {
    pub text: String,
    pub json: String,
}

impl Output {
    fn new(text: String, doc: &impl Serialize) -> Result<Self, CliError> {
        Ok(Output {
            text,
            json: serde_json::to_string_pretty(doc).map_err(|e| CliError::Io(e.to_string()))?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

pub struct Ctx {
    pub tau: f64,
    pub mode: Mode,
    pub steps: usize,
    pub tol: f64,
}

impl Ctx {
    pub fn klein(&self) -> Result<KleinBottle, CliError> {
        KleinBottle::standard(self.tau).map_err(|_| CliError::Usage(format!("--tau must be a finite positive number, got {}", self.tau)))
    }
}

fn cfmt(z: Complex64) -> String {
    format!("{:+.15} {:+.15}i", z.re, z.im)
}

fn cdoc(z: Complex64) -> ComplexDoc {
    ComplexDoc { re: z.re, im: z.im }
}

fn obstruction_text(class: FixedClassKind, sign: Option<i32>) -> String {
    match sign {
        Some(1) => format!("{class}, obstruction +1"),
        Some(s) => format!("{class}, obstruction {s}"),
        None => class.to_string(),
    }
}

fn classify_line<S: Scalar>(
    ctx: &Ctx,
    line: &LineBundleClass<S>,
    integrate: bool,
) -> Result<(FixedClassKind, Option<i32>, Option<Complex64>), CliError> {
    let class = line.classify_fixed()?;
    if !class.is_fixed() {
        return Ok((class, None, None));
    }
    let x = ctx.klein()?;
    let sign = realness_sign(line, &x)?.value();
    let integrated = if integrate {
        Some(integrated_composition(line, &x, ctx.steps)?)
    } else {
        None
    };
    Ok((class, Some(sign), integrated))
}

pub fn line_classify(ctx: &Ctx, d: i64, a: &str, b: &str, integrate: bool) -> Result<Output, CliError> {
    let (line, (class, sign, integrated)) = match ctx.mode {
        Mode::Exact => {
            let l = ExactLineBundle::new(d, ExactPoint::new(input::exact("a", a)?, input::exact("b", b)?)?);
            let out = classify_line(ctx, &l, integrate)?;
            (LineDoc::Exact(l), out)
        }
        Mode::Float => {
            let l = FloatLineBundle::new(d, FloatPoint::new(input::float("a", a)?, input::float("b", b)?)?);
            let out = classify_line(ctx, &l, integrate)?;
            (LineDoc::Float(l), out)
        }
    };
    let mut text = obstruction_text(class, sign);
    if let Some(z) = integrated {
        let _ = write!(text, "\nintegrated (σ*η̄)∘η = {}", cfmt(z));
    }
    let report = LineClassifyReport {
        line,
        class,
        obstruction: sign,
        integrated_holonomy: integrated.map(cdoc),
    };
    Output::new(text, &report)
}

pub fn torsion(r: u32, real_only: bool) -> Result<Output, CliError> {
    let group = torsion_subgroup(r, real_only)?;
    let elements: Vec<ExactPoint> = group.elements().iter().cloned().collect();
    let name = if real_only { "Γ^R" } else { "Γ" };
    let mut text = format!("{name}_{r}: {} elements", elements.len());
    for p in &elements {
        let _ = write!(text, "\n{p}");
    }
    let report = TorsionReport {
        r,
        real_only,
        order: elements.len(),
        elements,
    };
    Output::new(text, &report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PathArg {
    UnitLoop,
    HalfSegment,
}

pub fn holonomy(ctx: &Ctx, z0: &str, path: PathArg, integrator: Integrator) -> Result<Output, CliError> {
    let x = ctx.klein()?;
    let z0 = input::complex("z0", z0)?;
    let conn = Connection64::new(z0, x.tau())?;
    let (spec, name) = match path {
        PathArg::UnitLoop => (PathSpec::unit_loop(ctx.steps), "unit-loop"),
        PathArg::HalfSegment => (PathSpec::half_segment(Complex64::new(0.0, 0.0), ctx.steps), "half-segment"),
    };
    let value = parallel_transport_with(&conn, &spec, integrator)?;
    // exact transport along a straight segment v: exp(−A(v))
    let closed = match path {
        PathArg::UnitLoop => conn.holonomy_unit_loop(),
        PathArg::HalfSegment => (-conn.form(Complex64::new(0.5, 0.0))).exp(),
    };
    let error = (value - closed).norm();
    let within = error <= ctx.tol;
    let text = format!(
        "holonomy    = {}\nclosed form = {}\nerror       = {:.3e}\nwithin tol  = {}",
        cfmt(value),
        cfmt(closed),
        error,
        within
    );
    let report = HolonomyReport {
        tau: x.tau(),
        z0: cdoc(z0),
        path: name.to_string(),
        integrator,
        steps: ctx.steps,
        holonomy: cdoc(value),
        closed_form: cdoc(closed),
        error,
        tol: ctx.tol,
        within_tol: within,
    };
    Output::new(text, &report)
}

fn stratum_text(s: &Rank2Stratum) -> String {
    match s {
        Rank2Stratum::Stable22 { line } | Rank2Stratum::Stable20 { line } => format!("{} line={line}", s.name()),
        Rank2Stratum::PolyNotStable { points } => format!("{} points={},{}", s.name(), points[0], points[1]),
        Rank2Stratum::SelfExtStratum { point } => format!("{} point={point}", s.name()),
        Rank2Stratum::SplitUnstable { lines } => format!("{} lines={},{}", s.name(), lines[0], lines[1]),
    }
}

pub fn rank2_classify(desc: &str) -> Result<Output, CliError> {
    let input = input::descriptor("desc", desc)?;
    let class = classify_rank2(&input)?;
    let stab = stability(&input)?;
    let text = format!(
        "{} twist={}\nstability: {stab}",
        stratum_text(&class.stratum),
        class.twist
    );
    let report = Rank2Report {
        input,
        stability: stab,
        twist: class.twist,
        reduced: class.stratum,
    };
    Output::new(text, &report)
}

pub fn iso_test(left: &str, right: &str) -> Result<Output, CliError> {
    let left = input::descriptor("left", left)?;
    let right = input::descriptor("right", right)?;
    let iso = is_isomorphic(&left, &right)?;
    let report = IsoReport {
        isomorphic: iso,
        left_normal: normalize_desc(&left)?,
        right_normal: normalize_desc(&right)?,
        left,
        right,
    };
    let text = format!(
        "{}\nleft:  {}\nright: {}",
        if iso { "isomorphic" } else { "not isomorphic" },
        report.left_normal,
        report.right_normal
    );
    Output::new(text, &report)
}

fn moduli_text(m: &ModuliDesc) -> String {
    let mut text = format!("(r={}, d={}): {}, dimension {}", m.r, m.d, m.kind, m.dimension);
    match &m.parametrization {
        Parametrization::Empty => {}
        Parametrization::Circle { circumference } => {
            let _ = write!(text, "\ncircle of circumference {circumference}, t -> W ⊗ φ(t)");
        }
        Parametrization::TorusQuotient {
            side,
            involution_shift,
            free,
            removed_b,
        } => {
            let _ = write!(
                text,
                "\ntorus of side {side} modulo (a, b) -> (a + {involution_shift}, -b){}",
                if *free { ", free" } else { "" }
            );
            if let Some(b) = removed_b {
                let _ = write!(text, "\nremoved: circle b = {b}");
            }
        }
    }
    if let Some(locus) = &m.real_locus {
        let _ = write!(
            text,
            "\nfixed circles: real b = {}, obstructed b = {} (side {})",
            locus.real_b, locus.obstructed_b, locus.side
        );
    }
    text
}

pub fn moduli_report(ctx: &Ctx, r: u32, d: i64, a: Option<&str>, b: Option<&str>) -> Result<Output, CliError> {
    let moduli = moduli_descriptor(r, d)?;
    let mut text = moduli_text(&moduli);
    let (a, b) = match (a, b) {
        (None, None) => return Output::new(text, &moduli),
        (Some(a), b) => (a, b.unwrap_or("0")),
        (None, Some(_)) => return Err(CliError::Usage("--b needs --a".into())),
    };
    let key = match ctx.mode {
        Mode::Exact => canonical_key(r, d, &ExactPoint::new(input::exact("a", a)?, input::exact("b", b)?)?)?,
        Mode::Float => canonical_key_float(r, d, &FloatPoint::new(input::float("a", a)?, input::float("b", b)?)?)?,
    };
    let _ = write!(text, "\nkey: {key}");
    Output::new(text, &KeyReport { moduli, key })
}

pub fn construct(ctx: &Ctx, r: u32, d: i64, t: &str) -> Result<Output, CliError> {
    let t: Rational = input::exact("t", t)?;
    let c = construct_stable_real(r, d, t)?;
    let x = ctx.klein()?;
    let cover = c.recipe.cover(&x)?;
    let source_class = c.recipe.source_kind()?;
    let source_sign = realness_sign(&c.recipe.source, &cover)?.value();
    let determinant = c.recipe.determinant();
    let KeyValue::Circle { t: key_t } = c.key.value else {
        unreachable!("coprime keys live on a circle")
    };
    let text = format!(
        "W(r={r}, d={d}) ⊗ φ({t})\n\
         cover: C/<{}, {}·iτ> -> Y_τ, degree {}, τ' = {}, σ'(z) = conj(z) + {}\n\
         source: {} {source_class}, obstruction {}\n\
         determinant: {determinant}\n\
         key: t = {key_t}\n\
         atom: {}",
        c.recipe.cover_lattice.0,
        c.recipe.cover_lattice.1,
        c.recipe.covering_degree,
        cover.tau(),
        c.recipe.cover_involution_shift,
        c.recipe.source,
        if source_sign > 0 { "+1".to_string() } else { source_sign.to_string() },
        c.atom
    );
    let report = ConstructReport {
        r,
        d,
        t,
        atom: c.atom.clone(),
        key: c.key.clone(),
        cover_lattice: [c.recipe.cover_lattice.0, c.recipe.cover_lattice.1],
        covering_degree: c.recipe.covering_degree,
        cover_tau: cover.tau(),
        cover_involution_shift: c.recipe.cover_involution_shift,
        source: c.recipe.source.clone(),
        source_class,
        source_sign,
        determinant,
    };
    Output::new(text, &report)
}

pub fn fixed_locus(ctx: &Ctx, r: u32, grid: u32) -> Result<Output, CliError> {
    let locus = fixed_locus_delta(r)?;
    let x = ctx.klein()?;
    let side = locus.side();
    let mut text = format!("fixed locus of conjugation on Pic0/Γ_{r}, side {side}");
    let circles: Vec<CircleDoc> = locus
        .circles()
        .iter()
        .map(|(tag, b)| CircleDoc { tag: *tag, b: *b })
        .collect();
    for c in &circles {
        let _ = write!(text, "\n{} circle b = {}", c.tag, c.b);
    }
    let mut points = Vec::new();
    for c in &circles {
        for k in 0..i64::from(grid) {
            let a = side * Rational::new(k, i64::from(grid));
            let p = ExactPoint::new(a, c.b)?;
            let lift = locus.lift(&p).expect("grid points lie on the circle");
            let sign = realness_sign(&lift, &x)?.value();
            let _ = write!(text, "\n{p} {} lift={lift} obstruction {}", c.tag, if sign > 0 { "+1".into() } else { sign.to_string() });
            points.push(FixedPointDoc {
                point: p,
                tag: c.tag,
                lift,
                sign,
            });
        }
    }
    let report = FixedLocusReport {
        r,
        side,
        circles,
        points,
    };
    Output::new(text, &report)
}

pub fn plot(ctx: &Ctx, d: i64, r: u32, out: &Path) -> Result<Output, CliError> {
    let x = ctx.klein()?;
    let plot = plot::render(d, r, x.tau())?;
    let csv_path = out.with_extension("csv");
    fs::write(out, &plot.svg)?;
    plot::write_csv(&csv_path, &plot.rows)?;
    let report = PlotReport {
        svg: out.display().to_string(),
        csv: csv_path.display().to_string(),
        svg_bytes: plot.svg.len(),
        rows: plot.rows.len(),
    };
    let text = format!(
        "wrote {} ({} bytes) and {} ({} rows)",
        report.svg, report.svg_bytes, report.csv, report.rows
    );
    Output::new(text, &report)
}
