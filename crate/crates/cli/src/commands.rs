//! The `run`, `verify`, `transform` and `render` subcommands.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use anyhow::anyhow;
use evolab_core::dynamics::{iterate, IterationTrace, Transform};
use evolab_core::error::Error as GeomError;
use evolab_core::geometry::Polygon;
use evolab_core::harmonics::decompose_equiangular;
use evolab_core::involute::{a_involute_family, p_involute_family};
use evolab_core::p_evolute::{pseudo_steiner, spectral_report};
use evolab_core::smooth::{evolute_smooth, evolvent_smooth, iterate_smooth, SmoothMode, SupportPoly};
use serde_json::{json, Value};

use crate::gen::{trial_rng, GenSpec};
use crate::io::{self, num};
use crate::svg::{render_svg, SvgStyle};
use crate::verify;

/// Bad flags, unreadable or invalid input: exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl fmt::Display) -> anyhow::Error {
    anyhow::Error::new(UsageError(format!("{e:#}")))
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_TERMINAL: u8 = 3;

/// Exit status for an error: geometric events map to 3, everything else to 2.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        EXIT_USAGE
    } else if err.downcast_ref::<GeomError>().is_some() {
        EXIT_TERMINAL
    } else {
        EXIT_USAGE
    }
}

/// Where inputs come from: a file, or a generator with a seed.
#[derive(Debug, Clone)]
pub struct Source {
    pub input: Option<PathBuf>,
    pub gen: Option<GenSpec>,
    pub seed: u64,
}

impl Source {
    fn check(&self) -> anyhow::Result<()> {
        match (&self.input, &self.gen) {
            (Some(_), Some(_)) => Err(usage("--input and --gen are mutually exclusive")),
            (None, None) => Err(usage("one of --input or --gen is required")),
            _ => Ok(()),
        }
    }

    fn is_smooth(&self) -> bool {
        self.gen.is_some_and(|g| g.is_smooth())
    }

    fn describe(&self) -> String {
        match (&self.input, &self.gen) {
            (Some(p), _) => format!("input={}", p.display()),
            (_, Some(g)) => format!("gen={g}"),
            _ => String::new(),
        }
    }

    fn polygons(&self, trial: u64) -> anyhow::Result<Vec<Polygon>> {
        self.check()?;
        if let Some(path) = &self.input {
            return io::read_polygons(path).map_err(usage);
        }
        let g = self.gen.expect("checked");
        Ok(vec![g.polygon(&mut trial_rng(self.seed, trial)).map_err(usage)?])
    }

    fn polygon(&self, trial: u64) -> anyhow::Result<Polygon> {
        let mut all = self.polygons(trial)?;
        if all.len() != 1 {
            return Err(usage(format!("expected one polygon, found {}", all.len())));
        }
        Ok(all.remove(0))
    }

    fn support(&self, trial: u64) -> anyhow::Result<SupportPoly> {
        self.check()?;
        if let Some(path) = &self.input {
            return io::read_support(path).map_err(usage);
        }
        let g = self.gen.expect("checked");
        g.support(&mut trial_rng(self.seed, trial)).map_err(usage)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub jsonl: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub struct RunConfig {
    pub transform: String,
    pub source: Source,
    pub steps: usize,
    pub trials: usize,
    pub outputs: Outputs,
}

fn trace_summary(trial: u64, trace: &IterationTrace) -> Value {
    json!({
        "trial": trial,
        "steps_completed": trace.scale_log.len(),
        "classification": trace.classification.name(),
        "period_estimate": trace.period_estimate,
        "rotation_period": trace.rotation_period.map(|r| json!({ "lag": r.lag, "angle": num(r.angle) })),
        "terminal": trace.terminal.as_ref().map(|e| e.to_string()),
        "final_scale_log": trace.scale_log.last().copied().map(num),
        "final_hypocycloid_residuals": final_residuals(trace),
    })
}

/// Harmonic residuals of the last step against each order, when it is equiangular.
fn final_residuals(trace: &IterationTrace) -> Value {
    let Some(last) = trace.steps.last() else {
        return Value::Null;
    };
    match decompose_equiangular(last) {
        Ok(d) => {
            let m = d.dominant_order(&[]);
            json!({ "dominant_order": m, "residual_outside_dominant": num(d.residual_outside(&[m], &[])) })
        }
        Err(_) => Value::Null,
    }
}

/// Iterates a transform over one or more trials and writes the requested artifacts.
/// Returns the JSON summary and whether any trial ended in a terminal event.
pub fn run(cfg: &RunConfig) -> anyhow::Result<(Value, bool)> {
    if cfg.trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    let src = &cfg.source;
    let header = format!(
        "evolab run transform={} {} seed={} steps={} trials={}",
        cfg.transform,
        src.describe(),
        src.seed,
        cfg.steps,
        cfg.trials
    );
    if let Some(mode) = smooth_mode(&cfg.transform) {
        return run_smooth(cfg, mode, &header);
    }
    if src.is_smooth() {
        return Err(usage("generator yields a support function; use smooth_evolute or smooth_evolvent"));
    }
    let transform: Transform = cfg.transform.parse().map_err(usage)?;

    let mut traces = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials as u64 {
        let poly = src.polygon(trial)?;
        traces.push((trial, iterate(transform, &poly, cfg.steps)?));
    }
    let refs: Vec<(u64, &IterationTrace)> = traces.iter().map(|(t, x)| (*t, x)).collect();

    if let Some(path) = &cfg.outputs.csv {
        io::write_file(path, &io::trace_csv(&header, &refs)?)?;
    }
    if let Some(path) = &cfg.outputs.jsonl {
        let body: String = refs.iter().map(|(t, x)| io::trace_jsonl(src.seed, *t, x)).collect();
        io::write_file(path, &body)?;
    }
    if let Some(path) = &cfg.outputs.svg {
        // The last few normalized steps of the first trial.
        let steps = &refs[0].1.steps;
        let tail = &steps[steps.len().saturating_sub(4)..];
        let style = SvgStyle {
            markers: true,
            arrows: false,
            header: Some(header.clone()),
        };
        io::write_file(path, &render_svg(tail, &style)?)?;
    }

    let mut periods: BTreeMap<String, usize> = BTreeMap::new();
    let mut rotations: BTreeMap<String, usize> = BTreeMap::new();
    let mut classes: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, t) in &refs {
        let key = t.period_estimate.map_or_else(|| "none".to_string(), |p| p.to_string());
        *periods.entry(key).or_default() += 1;
        let key = t.rotation_period.map_or_else(
            || "none".to_string(),
            |r| format!("lag {} angle {:.3}pi", r.lag, r.angle / std::f64::consts::PI),
        );
        *rotations.entry(key).or_default() += 1;
        *classes.entry(t.classification.name()).or_default() += 1;
    }
    let terminal = refs.iter().any(|(_, t)| t.terminal.is_some());
    let summary = json!({
        "header": header,
        "seed": src.seed,
        "transform": transform.name(),
        "steps": cfg.steps,
        "trials": refs.iter().map(|(t, x)| trace_summary(*t, x)).collect::<Vec<_>>(),
        "period_histogram": periods,
        "rotation_period_histogram": rotations,
        "classification_histogram": classes,
    });
    Ok((summary, terminal))
}

fn smooth_mode(name: &str) -> Option<SmoothMode> {
    match name {
        "smooth_evolute" => Some(SmoothMode::Evolute),
        "smooth_evolvent" => Some(SmoothMode::Evolvent),
        _ => None,
    }
}

fn run_smooth(cfg: &RunConfig, mode: SmoothMode, header: &str) -> anyhow::Result<(Value, bool)> {
    let src = &cfg.source;
    let mut trials = Vec::new();
    let mut jsonl = String::new();
    for trial in 0..cfg.trials as u64 {
        let s = src.support(trial)?;
        let trace = iterate_smooth(&s, cfg.steps, mode)?;
        for (i, shape) in trace.shapes.iter().enumerate() {
            let rec = json!({ "seed": src.seed, "trial": trial, "step": i, "support": io::support_json(shape) });
            jsonl.push_str(&rec.to_string());
            jsonl.push('\n');
        }
        trials.push(json!({
            "trial": trial,
            "dominant": trace.dominant,
            "final": trace.shapes.last().map(io::support_json),
        }));
    }
    if let Some(path) = &cfg.outputs.jsonl {
        io::write_file(path, &jsonl)?;
    }
    if cfg.outputs.csv.is_some() || cfg.outputs.svg.is_some() {
        return Err(usage("smooth runs write --jsonl only"));
    }
    let summary = json!({
        "header": header,
        "seed": src.seed,
        "transform": cfg.transform,
        "steps": cfg.steps,
        "trials": trials,
    });
    Ok((summary, false))
}

/// Runs one criterion or all of them; prints every check and a summary line per criterion.
pub fn verify(name: &str, opts: &verify::Options) -> anyhow::Result<(String, bool)> {
    let reports = if name == "all" {
        verify::run_all(opts)?
    } else {
        vec![verify::run(name, opts).map_err(usage)?]
    };
    let mut out = String::new();
    for r in &reports {
        for c in &r.checks {
            out.push_str(&format!("    {c}\n"));
        }
        out.push_str(&r.summary());
        out.push('\n');
    }
    Ok((out, reports.iter().all(verify::Report::passed)))
}

pub const ANALYSES: [&str; 7] = [
    "spectral_report",
    "harmonics",
    "p_involute_family",
    "a_involute_family",
    "pseudo_steiner",
    "smooth_evolute",
    "smooth_evolvent",
];

/// One application of a transform (or `steps` of them), or a one-shot analysis.
pub fn transform(name: &str, src: &Source, steps: usize, csv: Option<&PathBuf>) -> anyhow::Result<Value> {
    if let Some(mode) = smooth_mode(name) {
        let mut s = src.support(0)?;
        for _ in 0..steps {
            s = match mode {
                SmoothMode::Evolute => evolute_smooth(&s),
                SmoothMode::Evolvent => evolvent_smooth(&s)?,
            };
        }
        return Ok(io::support_json(&s));
    }
    let poly = src.polygon(0)?;
    let value = match name {
        "spectral_report" => {
            let (theta, _) = poly.turning_angles();
            io::spectral_json(&spectral_report(&theta)?)
        }
        "harmonics" => {
            let d = decompose_equiangular(&poly)?;
            if let Some(path) = csv {
                io::write_file(path, &io::decomposition_csv(&d)?)?;
            }
            io::decomposition_json(&d)
        }
        "p_involute_family" => io::family_json(&p_involute_family(&poly)?),
        "a_involute_family" => io::family_json(&a_involute_family(&poly)?),
        "pseudo_steiner" => {
            let (theta, _) = poly.turning_angles();
            let ps = pseudo_steiner(&theta, &poly.alphas())?;
            let c = ps.point(&poly.supports());
            json!({ "point": [num(c.x), num(c.y)] })
        }
        other => {
            let t: Transform = other.parse().map_err(|_| {
                usage(format!(
                    "unknown transform `{other}`; expected a polygon transform or one of {}",
                    ANALYSES.join(", ")
                ))
            })?;
            let mut q = poly;
            for _ in 0..steps {
                q = t.apply(&q)?;
            }
            io::polygon_json(&q)
        }
    };
    Ok(value)
}

/// Draws the input polygons, each optionally followed by its image under `overlay`.
pub fn render(src: &Source, overlay: Option<&str>, style: &SvgStyle) -> anyhow::Result<String> {
    let base = src.polygons(0)?;
    let mut all = Vec::with_capacity(2 * base.len());
    match overlay {
        Some(name) => {
            let t: Transform = name.parse().map_err(usage)?;
            for p in &base {
                all.push(p.clone());
            }
            for p in &base {
                all.push(t.apply(p)?);
            }
        }
        None => all = base,
    }
    if all.is_empty() {
        return Err(usage(GeomError::EmptyInput));
    }
    let mut style = style.clone();
    if style.header.is_none() {
        style.header = Some(format!("evolab render {} seed={}", src.describe(), src.seed));
    }
    render_svg(&all, &style).map_err(|e| anyhow!(e))
}
