//! Theorem checks with independently computed oracles.
//!
//! Each criterion returns a [`Report`] of residual checks. Randomized criteria draw trial
//! `t` of sub-check `s` from stream `(criterion << 32) | (s << 24) | t` of the seed.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::time::Instant;

use anyhow::{anyhow, bail};
use evolab_core::a_evolute::a_o_lines;
use evolab_core::dynamics::{homothety_check, hypocycloid_residual, iterate, orbit, sup_distance, Transform};
use evolab_core::geometry::{compose_reflections, eps_qp, reduce_angle, CoorientedLine, Isometry, Point, Polygon};
use evolab_core::harmonics::{equiangular_directions, vertex_centroid};
use evolab_core::involute::{a_evolvent, p_evolvent, p_involute_family, pedal_histogram, pedal_matrix, FamilyKind, Parity};
use evolab_core::linalg::{eigenvalues, matching_distance, Complex};
use evolab_core::p_evolute::{m_matrix, p_evolute_transform, p_matrix};
use evolab_core::smooth::{evolute_smooth, iterate_smooth, steiner_point_smooth, SmoothMode, SupportPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::gen::{trial_rng, GenSpec};

#[derive(Debug, Clone, PartialEq)]
enum Bound {
    /// `measured < tol`.
    Below(f64),
    /// `measured > bound`.
    Above(f64),
    /// `measured == 0`, for counts.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    bound: Bound,
}

impl Check {
    pub fn below(label: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            bound: Bound::Below(tol),
        }
    }

    pub fn above(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            bound: Bound::Above(bound),
        }
    }

    pub fn zero(label: impl Into<String>, count: usize) -> Self {
        Self {
            label: label.into(),
            measured: count as f64,
            bound: Bound::Zero,
        }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::Below(t) => self.measured < t,
            Bound::Above(b) => self.measured > b,
            Bound::Zero => self.measured == 0.0,
        }
    }

    /// Replaces a residual tolerance; counts and lower bounds are left alone.
    fn override_tol(&mut self, tol: f64) {
        if let Bound::Below(t) = &mut self.bound {
            *t = tol;
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok  " } else { "FAIL" };
        match self.bound {
            Bound::Below(t) => write!(f, "{status} {}: {:.3e} < {:.0e}", self.label, self.measured, t),
            Bound::Above(b) => write!(f, "{status} {}: {:.6} > {}", self.label, self.measured, b),
            Bound::Zero => write!(f, "{status} {}: {} == 0", self.label, self.measured),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub number: usize,
    pub id: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// One line: status, criterion, and the failing or tightest check.
    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let worst = self
            .checks
            .iter()
            .find(|c| !c.passed())
            .or_else(|| self.checks.first())
            .map(|c| c.to_string())
            .unwrap_or_default();
        format!(
            "{status} {:>2} {:<24} {} check(s), {:.2}s; {}",
            self.number,
            self.id,
            self.checks.len(),
            self.seconds,
            worst
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub seed: u64,
    /// Overrides the main trial count of randomized criteria.
    pub trials: Option<usize>,
    /// Overrides every residual tolerance.
    pub tol: Option<f64>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            seed: 1,
            trials: None,
            tol: None,
        }
    }
}

type Criterion = fn(&Options) -> anyhow::Result<Vec<Check>>;

pub const CRITERIA: [(&str, Criterion); 14] = [
    ("equiangular-spectrum", equiangular_spectrum),
    ("symmetric-spectrum", symmetric_spectrum),
    ("quadrilateral-homothety", quadrilateral_homothety),
    ("grunbaum-pentagon", grunbaum_pentagon),
    ("degenerate-pentagon", degenerate_pentagon),
    ("hexagon-duality", hexagon_duality),
    ("hypocycloid-scalings", hypocycloid_scalings),
    ("antisymmetry", antisymmetry),
    ("involute-round-trips", involute_round_trips),
    ("a-odd-evolvent", a_odd_evolvent),
    ("ergodic-map", ergodic_map),
    ("smooth-limits", smooth_limits),
    ("equiangular-a-limit", equiangular_a_limit),
    ("evolvent-limits", evolvent_limits),
];

pub fn criterion_ids() -> impl Iterator<Item = &'static str> {
    CRITERIA.iter().map(|(id, _)| *id)
}

/// Looks up a criterion by id or by its 1-based number.
pub fn run(name: &str, opts: &Options) -> anyhow::Result<Report> {
    let index = CRITERIA
        .iter()
        .position(|(id, _)| *id == name)
        .or_else(|| name.parse::<usize>().ok().filter(|k| (1..=14).contains(k)).map(|k| k - 1))
        .ok_or_else(|| anyhow!("unknown criterion `{name}`"))?;
    let (id, f) = CRITERIA[index];
    let start = Instant::now();
    let mut checks = f(opts)?;
    let seconds = start.elapsed().as_secs_f64();
    if let Some(tol) = opts.tol {
        checks.iter_mut().for_each(|c| c.override_tol(tol));
    }
    Ok(Report {
        number: index + 1,
        id,
        checks,
        seconds,
    })
}

pub fn run_all(opts: &Options) -> anyhow::Result<Vec<Report>> {
    criterion_ids().map(|id| run(id, opts)).collect()
}

fn rng(opts: &Options, criterion: u64, sub: u64, trial: usize) -> ChaCha8Rng {
    trial_rng(opts.seed, (criterion << 32) | (sub << 24) | trial as u64)
}

fn trials(opts: &Options, default: usize) -> usize {
    opts.trials.unwrap_or(default)
}

fn angle_gap(a: f64, b: f64) -> f64 {
    reduce_angle(a - b).abs()
}

fn line_gap(a: &CoorientedLine, b: &CoorientedLine) -> f64 {
    angle_gap(a.alpha(), b.alpha()).max((a.p() - b.p()).abs())
}

/// Distance between lines as point sets.
fn unoriented_gap(a: &CoorientedLine, b: &CoorientedLine) -> f64 {
    line_gap(a, b).min(line_gap(a, &b.reversed()))
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn centroid(v: &[Point]) -> Point {
    v.iter().sum::<Point>() / v.len() as f64
}

fn diameter(v: &[Point]) -> f64 {
    let mut d = 0.0_f64;
    for a in v {
        for b in v {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Least-squares map `x ↦ r·x + t` taking `a` to `b`, index by index: `(r, max residual)`.
fn fit_homothety(a: &[Point], b: &[Point]) -> (f64, f64) {
    let (ca, cb) = (centroid(a), centroid(b));
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - ca).dot(&(y - cb))).sum();
    let den: f64 = a.iter().map(|x| (x - ca).norm_squared()).sum();
    let r = num / den;
    let res = a
        .iter()
        .zip(b)
        .map(|(x, y)| ((x - ca) * r - (y - cb)).norm())
        .fold(0.0, f64::max);
    (r, res)
}

fn p_power(poly: &Polygon, k: usize) -> anyhow::Result<Polygon> {
    let mut q = poly.clone();
    for _ in 0..k {
        q = p_evolute_transform(&q)?;
    }
    Ok(q)
}

fn equiangular_spectrum(_: &Options) -> anyhow::Result<Vec<Check>> {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for n in 3..=12 {
        let pm = p_matrix(&vec![TAU / n as f64; n])?;
        let got = eigenvalues(pm.entries())?;
        let s1 = (TAU / n as f64).sin();
        let want: Vec<Complex<f64>> = (0..n)
            .map(|m| Complex::new(0.0, (TAU * m as f64 / n as f64).sin() / s1))
            .collect();
        worst = worst.max(matching_distance(&got, &want));
    }
    Ok(vec![
        Check::below("eigenvalue distance to i sin(2πm/n)/sin(2π/n), n = 3..12", worst, 1e-9),
        Check::below("runtime seconds", start.elapsed().as_secs_f64(), 1.0),
    ])
}

fn symmetric_spectrum(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let start = Instant::now();
    let (mut sym, mut tr) = (0.0_f64, 0.0_f64);
    for n in 4..=9 {
        for t in 0..trials(opts, 1000) {
            let poly = GenSpec::RandomNgon(n).polygon(&mut rng(opts, 2, n as u64, t))?;
            let (theta, _) = poly.turning_angles();
            let pm = p_matrix(&theta)?;
            let eig = eigenvalues(pm.entries())?;
            let radius = eig.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
            let neg: Vec<Complex<f64>> = eig.iter().map(|z| -z).collect();
            sym = sym.max(matching_distance(&eig, &neg) / radius);
            let norm = pm.entries().singular_values().max();
            for k in (1..=n).step_by(2) {
                let trace = pm.power(k as u32).trace();
                tr = tr.max(trace.abs() / norm.powi(k as i32));
            }
        }
    }
    Ok(vec![
        Check::below("spectrum vs negated spectrum / spectral radius", sym, 1e-8),
        Check::below("|Tr P^k| / ‖P‖₂^k, odd k ≤ n", tr, 1e-8),
        Check::below("runtime seconds", start.elapsed().as_secs_f64(), 30.0),
    ])
}

fn quadrilateral_homothety(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let (mut res, mut ratio_gap, mut misses) = (0.0_f64, 0.0_f64, 0);
    for t in 0..trials(opts, 100) {
        let mut r = rng(opts, 3, 0, t);
        let p = GenSpec::RandomNgon(4).polygon(&mut r)?;
        let p2 = p_power(&p, 2)?;
        let (va, vb) = (p.vertices(), p2.vertices());
        let (ratio, fit) = fit_homothety(&va, &vb);
        res = res.max(fit / diameter(&va).max(diameter(&vb)));
        if homothety_check(&p, &p2).is_none() {
            misses += 1;
        }
        // Same directions, fresh supports.
        let other: Vec<f64> = (0..4).map(|_| r.random_range(-1.0..=1.0)).collect();
        let q = p.with_supports(&other)?;
        let q2 = p_power(&q, 2)?;
        let (ratio_q, _) = fit_homothety(&q.vertices(), &q2.vertices());
        ratio_gap = ratio_gap.max((ratio - ratio_q).abs());
    }
    Ok(vec![
        Check::below("P²(P) homothety residual / diameter", res, 1e-8),
        Check::zero("homothety_check rejections", misses),
        Check::below("ratio difference for equal turning angles", ratio_gap, 1e-8),
    ])
}

fn grunbaum_pentagon(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let (mut res, mut misses) = (0.0_f64, 0);
    for t in 0..trials(opts, 100) {
        let p = GenSpec::RandomNgon(5).polygon(&mut rng(opts, 4, 0, t))?;
        let p1 = p_power(&p, 1)?;
        let p3 = p_power(&p1, 2)?;
        let (va, vb) = (p1.vertices(), p3.vertices());
        let (_, fit) = fit_homothety(&va, &vb);
        res = res.max(fit / diameter(&va).max(diameter(&vb)));
        if homothety_check(&p1, &p3).is_none() {
            misses += 1;
        }
    }
    Ok(vec![
        Check::below("P³ vs P¹ homothety residual / diameter", res, 1e-8),
        Check::zero("homothety_check rejections", misses),
    ])
}

fn degenerate_pentagon(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let (mut spread, mut sin_sum) = (0.0_f64, 0.0_f64);
    for t in 0..trials(opts, 100) {
        let p = GenSpec::DegeneratePentagon.polygon(&mut rng(opts, 5, 0, t))?;
        let b = p.alternating_sums().partial;
        sin_sum = sin_sum.max(b.iter().map(|x| (2.0 * x).sin()).sum::<f64>().abs());
        let v = p_power(&p, 3)?.vertices();
        let c = centroid(&v);
        let s = v.iter().fold(0.0_f64, |m, x| m.max((x - c).norm()));
        spread = spread.max(s / diameter(&p.vertices()));
    }
    Ok(vec![
        Check::below("|Σ sin 2B_j| of generated angles", sin_sum, 1e-10),
        Check::below("P³ vertex spread / diameter", spread, 1e-7),
    ])
}

fn hexagon_duality(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let mut worst = 0.0_f64;
    for t in 0..trials(opts, 50) {
        let p = GenSpec::ParallelHexagon.polygon(&mut rng(opts, 6, 0, t))?;
        let p1 = p_power(&p, 1)?;
        let p3 = p_power(&p1, 2)?;
        let scale = 1.0 + max_abs(&p1.supports());
        // Hausdorff distance between the two line sets.
        let one_way = |a: &Polygon, b: &Polygon| {
            a.lines()
                .iter()
                .map(|l| b.lines().iter().map(|m| unoriented_gap(l, m)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        worst = worst.max(one_way(&p1, &p3).max(one_way(&p3, &p1)) / scale);
    }
    Ok(vec![Check::below("line-set distance of P³ and P¹ / (1 + max |p|)", worst, 1e-8)])
}

fn hypocycloid_scalings(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let (mut p_closed, mut p_smooth, mut a_closed, mut a_smooth) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let mut r = rng(opts, 7, 0, 0);
    for n in 5..=12_usize {
        let nf = n as f64;
        for m in (1..n).filter(|m| 2 * m < n) {
            let mf = m as f64;
            for _ in 0..3 {
                let (a, b): (f64, f64) = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
                let phi = equiangular_directions(n);
                let p: Vec<f64> = phi.iter().map(|x| a * (mf * x).cos() + b * (mf * x).sin()).collect();
                let poly = Polygon::from_parts(&phi, &p)?;
                let h = SupportPoly::new(1).with_term(m as u32, a, b);
                let dh = evolute_smooth(&h);

                let k = (TAU * mf / nf).sin() / (TAU / nf).sin();
                let e = p_evolute_transform(&poly)?;
                for (j, l) in e.lines().iter().enumerate() {
                    let x = phi[j];
                    let want = CoorientedLine::new(x + PI / 2.0, k * (-a * (mf * x).sin() + b * (mf * x).cos()));
                    p_closed = p_closed.max(line_gap(l, &want));
                    // m·(hypocycloid) is the smooth evolute of the same harmonic.
                    p_smooth = p_smooth.max((l.p() - k / mf * dh.eval(l.alpha())).abs());
                }

                let k = (PI * mf / nf).sin() / (PI / nf).sin();
                let e = a_o_lines(&poly)?;
                for (j, l) in e.lines().iter().enumerate() {
                    let x = phi[j] + PI / nf;
                    let want = CoorientedLine::new(x + PI / 2.0, k * (-a * (mf * x).sin() + b * (mf * x).cos()));
                    a_closed = a_closed.max(line_gap(l, &want));
                    a_smooth = a_smooth.max((l.p() - k / mf * dh.eval(l.alpha())).abs());
                }
            }
        }
    }
    let c2 = {
        let phi = equiangular_directions(5);
        let p: Vec<f64> = phi.iter().map(|x| (2.0 * x).cos()).collect();
        let e = p_evolute_transform(&Polygon::from_parts(&phi, &p)?)?;
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        norm(&e.supports()) / norm(&p)
    };
    Ok(vec![
        Check::below("P-evolute vs closed form", p_closed, 1e-10),
        Check::below("P-evolute vs sin(2πm/n)/(m sin(2π/n)) × smooth evolute", p_smooth, 1e-10),
        Check::below("A_o-evolute vs closed form", a_closed, 1e-10),
        Check::below("A_o-evolute vs sin(πm/n)/(m sin(π/n)) × smooth evolute", a_smooth, 1e-10),
        Check::below("n = 5, m = 2 factor − 2cos(2π/5)", (c2 - 2.0 * (TAU / 5.0).cos()).abs(), 1e-10),
    ])
}

fn antisymmetry(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let (mut anti, mut lengths) = (0.0_f64, 0.0_f64);
    for t in 0..trials(opts, 1000) {
        let n = 3 + t % 7;
        let poly = GenSpec::RandomNgon(n).polygon(&mut rng(opts, 8, 0, t))?;
        let (theta, _) = poly.turning_angles();
        let mm = m_matrix(&theta)?;
        let pm = p_matrix(&theta)?;
        let a = &mm * pm.entries();
        anti = anti.max((&a + a.transpose()).amax());
        let p = poly.supports();
        let ell = poly.side_lengths();
        for i in 0..n {
            let li: f64 = (0..n).map(|j| mm[(i, j)] * p[j]).sum();
            lengths = lengths.max((li - ell[i]).abs());
        }
    }
    Ok(vec![
        Check::below("max |MP + (MP)ᵀ|", anti, 1e-10),
        Check::below("max |Mp − side lengths|", lengths, 1e-10),
    ])
}

fn involute_round_trips(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let (mut even_res, mut even_missing) = (0.0_f64, 0);
    for t in 0..trials(opts, 200) {
        let n = [4, 6, 8][t % 3];
        let mut attempt = 0;
        let q = loop {
            let q = GenSpec::RandomNgon(n).polygon(&mut rng(opts, 9, 0, t * 64 + attempt))?;
            if matches!(compose_reflections(q.lines())?, Isometry::Rotation { .. }) {
                break q;
            }
            attempt += 1;
            if attempt == 64 {
                bail!("no rotation among 64 draws");
            }
        };
        match p_evolvent(&q) {
            Ok(e) => {
                let back = p_evolute_transform(&e)?;
                let d = back.lines().iter().zip(q.lines()).map(|(a, b)| line_gap(a, b)).fold(0.0, f64::max);
                even_res = even_res.max(d);
            }
            Err(_) => even_missing += 1,
        }
    }

    let (mut odd_res, mut odd_failures) = (0.0_f64, 0);
    for t in 0..trials(opts, 200) {
        let n = [3, 5, 7, 9][t % 4];
        let q = GenSpec::RandomZeroQp(n).polygon(&mut rng(opts, 9, 1, t))?;
        let family = match p_involute_family(&q) {
            Ok(f) if f.kind == FamilyKind::OneParameter => f,
            _ => {
                odd_failures += 1;
                continue;
            }
        };
        for s in [-2.0, -0.5, 0.0, 0.75, 3.0] {
            match family.member(&[s]).and_then(|e| p_evolute_transform(&e)) {
                Ok(back) => {
                    let d = back.lines().iter().zip(q.lines()).map(|(a, b)| line_gap(a, b)).fold(0.0, f64::max);
                    odd_res = odd_res.max(d);
                }
                Err(_) => odd_failures += 1,
            }
        }
    }

    let mut disagreements = 0;
    for t in 0..trials(opts, 1000) {
        let n = [3, 5, 7, 9][t % 4];
        let spec = if t % 2 == 0 { GenSpec::RandomZeroQp(n) } else { GenSpec::RandomNgon(n) };
        let q = spec.polygon(&mut rng(opts, 9, 2, t))?;
        let qp_zero = q.quasiperimeter()?.abs() <= eps_qp(&q.supports());
        let reflection = matches!(compose_reflections(q.lines())?, Isometry::Reflection { .. });
        if qp_zero != reflection {
            disagreements += 1;
        }
    }

    Ok(vec![
        Check::zero("even-gons with rotation but no P-evolvent", even_missing),
        Check::below("even-gons: P(p_evolvent(Q)) vs Q", even_res, 1e-8),
        Check::zero("odd-gons: family or member failures", odd_failures),
        Check::below("odd-gons: P(member) vs Q", odd_res, 1e-8),
        Check::zero("quasiperimeter-zero vs reflection disagreements", disagreements),
    ])
}

fn a_odd_evolvent(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let mut worst = 0.0_f64;
    for t in 0..trials(opts, 100) {
        let tri = GenSpec::AcuteTriangle.polygon(&mut rng(opts, 10, 0, t))?;
        let v = tri.vertices();
        let feet: Vec<Point> = (0..3)
            .map(|i| {
                let (a, b, c) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
                let d = c - b;
                b + d * ((a - b).dot(&d) / d.norm_squared())
            })
            .collect();
        let e = a_evolvent(&tri, Parity::Odd)?.vertices();
        let one_way = |x: &[Point], y: &[Point]| {
            x.iter()
                .map(|u| y.iter().map(|w| (u - w).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        worst = worst.max(one_way(&e, &feet).max(one_way(&feet, &e)));
    }
    Ok(vec![Check::below("A-evolvent vertices vs altitude feet", worst, 1e-8)])
}

fn ergodic_map(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let (mut dist, mut min_mod) = (0.0_f64, f64::INFINITY);
    for n in [3_usize, 5, 7, 9] {
        let got = eigenvalues(&pedal_matrix(n)?)?;
        let want: Vec<Complex<f64>> = (0..n)
            .map(|k| {
                let w = Complex::from_polar(1.0, TAU * k as f64 / n as f64);
                Complex::new(2.0, 0.0) / (w + 1.0)
            })
            .collect();
        dist = dist.max(matching_distance(&got, &want));
        // Drop the eigenvalue 1 of k = 0.
        let mut rest = got.clone();
        let one = rest
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - 1.0).norm().total_cmp(&(b.1 - 1.0).norm()))
            .map(|(i, _)| i)
            .expect("n ≥ 3");
        rest.remove(one);
        min_mod = rest.iter().fold(min_mod, |m, z| m.min(z.norm()));
    }
    let mut r = rng(opts, 11, 0, 0);
    let start: Vec<f64> = (0..3).map(|_| r.random_range(0.0..PI)).collect();
    let counts = pedal_histogram(&start, 100_000, 10)?;
    let empty = counts.iter().filter(|&&c| c == 0).count();
    Ok(vec![
        Check::below("eigenvalues vs 2/(1+ω^k), n = 3, 5, 7, 9", dist, 1e-10),
        Check::above("min |λ_k|, k ≥ 1", min_mod, 1.0),
        Check::zero("empty bins of 10×10 histogram, 10⁵ steps, n = 3", empty),
    ])
}

fn smooth_limits(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let (mut not_two, mut steiner) = (0, 0.0_f64);
    for t in 0..trials(opts, 20) {
        let d = 2 + (t % 5) as u32;
        let s = GenSpec::RandomSupport(d).support(&mut rng(opts, 12, 0, t))?;
        let trace = iterate_smooth(&s, 30, SmoothMode::Evolvent)?;
        if trace.dominant.last() != Some(&Some(2)) {
            not_two += 1;
        }
        let (a, b) = (steiner_point_smooth(&s)?, steiner_point_smooth(&evolute_smooth(&s))?);
        steiner = steiner.max((a - b).amax());
    }
    let mut not_top = 0;
    for degree in 2..=8_u32 {
        for t in 0..5 {
            let mut r = rng(opts, 12, 1, degree as usize * 16 + t);
            let mut s = GenSpec::RandomSupport(degree - 1).support(&mut r)?;
            let phase: f64 = r.random_range(0.0..TAU);
            s.set(degree, phase.cos(), phase.sin());
            let trace = iterate_smooth(&s, 30, SmoothMode::Evolute)?;
            if trace.dominant.last() != Some(&Some(degree)) {
                not_top += 1;
            }
        }
    }
    Ok(vec![
        Check::zero("evolvent iterates not dominated by harmonic 2 after 30 steps", not_two),
        Check::zero("evolute iterates not dominated by the top degree after 30 steps", not_top),
        Check::zero("Steiner point changes under the evolute", usize::from(steiner != 0.0)),
    ])
}

fn equiangular_a_limit(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in [6_usize, 8, 10] {
        let mut worst = 0.0_f64;
        for t in 0..trials(opts, 10) {
            let poly = GenSpec::Equiangular(n).polygon(&mut rng(opts, 13, n as u64, t))?;
            let trace = iterate(Transform::AoEvolute, &poly, 100)?;
            if let Some(e) = trace.terminal {
                bail!("A_o iteration stopped: {e}");
            }
            let last = trace.steps.last().expect("non-empty");
            worst = worst.max(hypocycloid_residual(last, n / 2)?);
        }
        checks.push(Check::below(
            format!("n = {n}: residual outside order {} after 100 A_o steps", n / 2),
            worst,
            1e-6,
        ));
    }
    let mut worst = 0.0_f64;
    for t in 0..trials(opts, 10) {
        let poly = GenSpec::Equiangular(6).polygon(&mut rng(opts, 13, 0, t))?;
        let trace = iterate(Transform::PEvolute, &poly, 20)?;
        for k in 1..trace.steps.len() - 2 {
            worst = worst.max(sup_distance(&trace.steps[k], &trace.steps[k + 2]));
        }
    }
    checks.push(Check::below("n = 6 P-evolutes: |P_k − P_(k+2)|, k ≥ 1", worst, 1e-9));
    Ok(checks)
}

fn evolvent_limits(opts: &Options) -> anyhow::Result<Vec<Check>> {
    let (mut hypo, mut centroid_gap) = (0.0_f64, 0.0_f64);
    for n in [5_usize, 7, 9] {
        for t in 0..trials(opts, 10) {
            let poly = GenSpec::EquiangularZeroMean(n).polygon(&mut rng(opts, 14, n as u64, t))?;
            let trace = iterate(Transform::PEvolvent, &poly, 100)?;
            if let Some(e) = trace.terminal {
                bail!("P-evolvent iteration stopped: {e}");
            }
            let last = trace.steps.last().expect("non-empty");
            hypo = hypo.max(hypocycloid_residual(last, (n - 1) / 2)?);

            let c = vertex_centroid(&poly);
            let (steps, stop) = orbit(Transform::AEvolvent(Parity::Even), &poly, 100);
            if let Some(e) = stop {
                bail!("A-evolvent iteration stopped: {e}");
            }
            let v = steps.last().expect("non-empty").vertices();
            centroid_gap = centroid_gap.max(v.iter().fold(0.0_f64, |m, x| m.max((x - c).norm())));
        }
    }
    Ok(vec![
        Check::below("P-evolvents: residual outside order (n−1)/2 after 100 steps", hypo, 1e-6),
        Check::below("A-evolvents: distance to initial vertex centroid after 100 steps", centroid_gap, 1e-6),
    ])
}
