//! JSON, JSONL and CSV encodings of polygons, support functions and reports.
//!
//! Floats are written with 17 significant digits; non-finite values become `null`.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use evolab_core::dynamics::IterationTrace;
use evolab_core::geometry::{CoorientedLine, Coorientation, Isometry, Point, Polygon};
use evolab_core::harmonics::HarmonicDecomposition;
use evolab_core::involute::{InvoluteFamily, Seed};
use evolab_core::p_evolute::SpectralReport;
use evolab_core::smooth::SupportPoly;
use serde::Deserialize;
use serde_json::{json, Map, Number, Value};

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    serde_json::from_str::<Number>(&s).map_or(Value::Null, Value::Number)
}

fn point(u: &Point) -> Value {
    json!([num(u.x), num(u.y)])
}

fn line(l: &CoorientedLine) -> Value {
    json!({ "alpha": num(l.alpha()), "p": num(l.p()) })
}

pub fn polygon_json(poly: &Polygon) -> Value {
    json!({
        "lines": poly.lines().iter().map(line).collect::<Vec<_>>(),
        "vertices": poly.vertices().iter().map(point).collect::<Vec<_>>(),
    })
}

#[derive(Deserialize)]
struct LineIn {
    alpha: f64,
    p: f64,
}

#[derive(Deserialize)]
struct VerticesIn {
    vertices: Vec<[f64; 2]>,
    #[serde(default)]
    coorientation: Option<String>,
}

// Dispatches on the key by hand: untagged enums cannot read arbitrary-precision numbers.
pub fn polygon_from_json(v: &Value) -> anyhow::Result<Polygon> {
    if let Some(lines) = v.get("lines") {
        let lines: Vec<LineIn> = serde_json::from_value(lines.clone()).context("`lines` must be [{\"alpha\", \"p\"}]")?;
        return Ok(Polygon::new(lines.iter().map(|l| CoorientedLine::new(l.alpha, l.p)).collect())?);
    }
    if v.get("vertices").is_none() {
        bail!("expected {{\"lines\": [{{\"alpha\", \"p\"}}]}} or {{\"vertices\": [[x, y]]}}");
    }
    let input: VerticesIn = serde_json::from_value(v.clone()).context("`vertices` must be [[x, y]]")?;
    let c = match input.coorientation.as_deref() {
        None | Some("ccw") => Coorientation::Ccw,
        Some("cw") => Coorientation::Cw,
        Some(other) => bail!("coorientation must be `ccw` or `cw`, got `{other}`"),
    };
    let pts: Vec<Point> = input.vertices.iter().map(|[x, y]| Point::new(*x, *y)).collect();
    Ok(Polygon::from_vertices(&pts, c)?)
}

/// All JSON values in a file: a single document, an array of documents, or JSON lines.
fn read_values(path: &Path) -> anyhow::Result<Vec<Value>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(v) = serde_json::from_str::<Value>(&text) {
        return Ok(match v {
            Value::Array(items) => items,
            other => vec![other],
        });
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).with_context(|| format!("{}:{}: invalid JSON", path.display(), i + 1))
        })
        .collect()
}

/// Polygons in a file; JSONL records may wrap the polygon in a `polygon` field.
pub fn read_polygons(path: &Path) -> anyhow::Result<Vec<Polygon>> {
    read_values(path)?
        .iter()
        .map(|v| polygon_from_json(v.get("polygon").unwrap_or(v)))
        .collect()
}

pub fn read_polygon(path: &Path) -> anyhow::Result<Polygon> {
    let mut all = read_polygons(path)?;
    if all.len() != 1 {
        bail!("{}: expected one polygon, found {}", path.display(), all.len());
    }
    Ok(all.remove(0))
}

pub fn support_json(s: &SupportPoly) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(k, a, b)| json!({ "k": k, "a": num(a), "b": num(b) }))
        .collect();
    json!({ "q": s.q(), "cycloidal": s.is_cycloidal(), "terms": terms })
}

#[derive(Deserialize)]
struct TermIn {
    k: u32,
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct SupportIn {
    #[serde(default = "one")]
    q: u32,
    #[serde(default)]
    cycloidal: bool,
    terms: Vec<TermIn>,
}

fn one() -> u32 {
    1
}

pub fn support_from_json(v: &Value) -> anyhow::Result<SupportPoly> {
    let input: SupportIn = serde_json::from_value(v.clone())
        .context("expected {\"q\", \"terms\": [{\"k\", \"a\", \"b\"}]}")?;
    if input.q == 0 {
        bail!("q must be positive");
    }
    let mut s = SupportPoly::new(input.q);
    for t in &input.terms {
        let (a, b) = s.coeff(t.k);
        s.set(t.k, a + t.a, b + t.b);
    }
    if input.cycloidal {
        s = SupportPoly::cycloidal(s)?;
    }
    Ok(s)
}

pub fn read_support(path: &Path) -> anyhow::Result<SupportPoly> {
    let values = read_values(path)?;
    let [v] = values.as_slice() else {
        bail!("{}: expected one support function, found {}", path.display(), values.len());
    };
    support_from_json(v)
}

pub fn spectral_json(r: &SpectralReport) -> Value {
    json!({
        "eigenvalues": r.eigenvalues.iter().map(|z| json!([num(z.re), num(z.im)])).collect::<Vec<_>>(),
        "invariant_pair_residual": num(r.invariant_pair_residual),
        "symmetry_residual": num(r.symmetry_residual),
        "imaginary_unit_residual": num(r.imaginary_unit_residual),
        "spectral_radius": num(r.spectral_radius),
        "max_modulus_class": r.max_modulus_class.name(),
        "plus_minus_i_dimension": r.plus_minus_i_dimension,
        "ill_conditioned": r.ill_conditioned,
    })
}

pub fn decomposition_json(d: &HarmonicDecomposition) -> Value {
    json!({
        "n": d.n,
        "base_alpha": num(d.base_alpha),
        "a0": num(d.a0),
        "terms": d.terms.iter().map(|t| json!({
            "m": t.m, "a": num(t.a), "b": num(t.b), "magnitude": num(t.magnitude()),
        })).collect::<Vec<_>>(),
        "a_half": d.a_half.map(num),
    })
}

/// Spectrum CSV: `m, a_m, b_m, magnitude`.
pub fn decomposition_csv(d: &HarmonicDecomposition) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "a_m", "b_m", "magnitude"])?;
    let mut row = |m: usize, a: f64, b: f64| w.write_record([m.to_string(), fmt(a), fmt(b), fmt(a.hypot(b))]);
    row(0, d.a0, 0.0)?;
    for t in &d.terms {
        row(t.m, t.a, t.b)?;
    }
    if let Some(a) = d.a_half {
        row(d.n / 2, a, 0.0)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn isometry_json(iso: &Isometry) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), iso.kind_name().into());
    match iso {
        Isometry::Identity => {}
        Isometry::Rotation { center, angle } => {
            m.insert("center".into(), point(center));
            m.insert("angle".into(), num(*angle));
        }
        Isometry::Translation { vector } => {
            m.insert("vector".into(), point(vector));
        }
        Isometry::Reflection { axis } => {
            m.insert("axis".into(), line(axis));
        }
        Isometry::Glide { axis, shift } => {
            m.insert("axis".into(), line(axis));
            m.insert("shift".into(), num(*shift));
        }
    }
    Value::Object(m)
}

fn seed_json(seed: &Seed) -> Value {
    match seed {
        Seed::None => json!({ "kind": "none" }),
        Seed::Point(c) => json!({ "kind": "point", "point": point(c) }),
        Seed::PointsOnLine(l) => json!({ "kind": "points_on_line", "line": line(l) }),
        Seed::AnyPoint => json!({ "kind": "any_point" }),
        Seed::Line(l) => json!({ "kind": "line", "line": line(l) }),
        Seed::PerpendicularPencil(l) => json!({ "kind": "perpendicular_pencil", "axis": line(l) }),
        Seed::PointPencil(c) => json!({ "kind": "point_pencil", "center": point(c) }),
        Seed::ParallelPencil(a) => json!({ "kind": "parallel_pencil", "alpha": num(*a) }),
        Seed::AnyLine => json!({ "kind": "any_line" }),
    }
}

pub fn family_json(f: &InvoluteFamily) -> Value {
    json!({
        "construction": format!("{:?}", f.construction),
        "kind": f.kind.name(),
        "parameter_count": f.kind.parameter_count(),
        "isometry": isometry_json(&f.isometry),
        "seed": seed_json(&f.seed),
        "reason": f.reason().map(|r| r.to_string()),
        "evolvent": f.evolvent.as_ref().map(polygon_json),
    })
}

pub fn fmt(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

/// Per-step trace CSV for a set of trials, preceded by a `#` header line carrying the
/// provenance.
pub fn trace_csv(header: &str, traces: &[(u64, &IterationTrace)]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["trial", "step", "scale_log", "centroid_drift", "classification"])?;
    for (trial, trace) in traces {
        for (i, (s, c)) in trace.scale_log.iter().zip(&trace.centroid_drift).enumerate() {
            w.write_record([
                trial.to_string(),
                (i + 1).to_string(),
                fmt(*s),
                fmt(*c),
                trace.classification.name().to_string(),
            ])?;
        }
    }
    let body = String::from_utf8(w.into_inner()?)?;
    Ok(format!("# {header}\n{body}"))
}

/// One JSON object per normalized step.
pub fn trace_jsonl(seed: u64, trial: u64, trace: &IterationTrace) -> String {
    let mut out = String::new();
    for (i, poly) in trace.steps.iter().enumerate() {
        let rec = json!({ "seed": seed, "trial": trial, "step": i, "polygon": polygon_json(poly) });
        out.push_str(&rec.to_string());
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_and_null() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(f64::INFINITY), Value::Null);
        let back: f64 = serde_json::from_value(num(std::f64::consts::PI)).unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn polygon_round_trip() {
        let poly = Polygon::from_parts(&[0.3, 1.9, 4.0], &[1.0, -0.5, 0.25]).unwrap();
        let back = polygon_from_json(&polygon_json(&poly)).unwrap();
        assert_eq!(back, poly);
    }

    #[test]
    fn vertex_form() {
        let v = json!({ "vertices": [[0, 0], [1, 0], [0, 1]] });
        let poly = polygon_from_json(&v).unwrap();
        let got = poly.vertices();
        assert!((got[1] - Point::new(1.0, 0.0)).norm() < 1e-15);
        let bad = json!({ "vertices": [[0, 0], [1, 0], [0, 1]], "coorientation": "up" });
        assert!(polygon_from_json(&bad).is_err());
        assert!(polygon_from_json(&json!({ "lines": [] })).is_err());
    }

    #[test]
    fn support_round_trip() {
        let s = SupportPoly::new(3).with_term(2, 0.5, -1.0).with_term(7, 0.0, 2.0);
        assert_eq!(support_from_json(&support_json(&s)).unwrap(), s);
    }

    #[test]
    fn jsonl_reader_accepts_wrapped_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("orbit.jsonl");
        let poly = Polygon::from_parts(&[0.3, 1.9, 4.0], &[1.0, -0.5, 0.25]).unwrap();
        let line = json!({ "step": 0, "polygon": polygon_json(&poly) }).to_string();
        fs::write(&path, format!("{line}\n{line}\n")).unwrap();
        assert_eq!(read_polygons(&path).unwrap().len(), 2);
        assert!(read_polygon(&path).is_err());
    }
}
