//! Involutes from fixed points and invariant lines of the side-reflection composition.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Complex, DMatrix, Matrix2};

use crate::a_evolute::{bisector, Bisector};
use crate::error::{Error, NoEvolventReason, Result};
use crate::geometry::{
    compose_reflections, eps_qp, reduce_angle, reflect_line, reflect_point, reflection_product, CoorientedLine,
    Isometry, Point, Polygon, EPS_ANGLE, EPS_ISO,
};
use crate::p_evolute::p_evolute_transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    None,
    Unique,
    OneParameter,
    TwoParameter,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::None => "none",
            FamilyKind::Unique => "unique",
            FamilyKind::OneParameter => "one_parameter",
            FamilyKind::TwoParameter => "two_parameter",
        }
    }

    pub fn parameter_count(&self) -> usize {
        match self {
            FamilyKind::None | FamilyKind::Unique => 0,
            FamilyKind::OneParameter => 1,
            FamilyKind::TwoParameter => 2,
        }
    }
}

/// Which evolute the family inverts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    P,
    A,
}

/// Construction seed, together with the chart used for family parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Seed {
    None,
    /// The single fixed point.
    Point(Point),
    /// Points `foot + t·direction` of a line of fixed points.
    PointsOnLine(CoorientedLine),
    /// Any point `(x, y)`.
    AnyPoint,
    /// The single invariant line.
    Line(CoorientedLine),
    /// Lines perpendicular to the axis, `t` measured along the axis direction.
    PerpendicularPencil(CoorientedLine),
    /// Lines through a point, parameterized by their normal angle.
    PointPencil(Point),
    /// Lines with the given normal angle and support number `t`.
    ParallelPencil(f64),
    /// Any line `(α, p)`.
    AnyLine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvoluteFamily {
    pub construction: Construction,
    pub kind: FamilyKind,
    pub seed: Seed,
    /// Composition of reflections in the sides of the base polygon.
    pub isometry: Isometry,
    pub evolvent: Option<Polygon>,
    base: Polygon,
}

impl InvoluteFamily {
    pub fn base(&self) -> &Polygon {
        &self.base
    }

    /// Why the family is empty, when it is.
    pub fn reason(&self) -> Option<NoEvolventReason> {
        if self.kind != FamilyKind::None {
            return None;
        }
        Some(match self.isometry {
            Isometry::Glide { .. } => NoEvolventReason::Glide,
            Isometry::Translation { .. } => NoEvolventReason::Translation,
            _ => NoEvolventReason::Rotation,
        })
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if self.kind == FamilyKind::None {
            return Err(Error::NoEvolvent(self.reason().unwrap_or(NoEvolventReason::DegenerateFamily)));
        }
        let expected = self.kind.parameter_count();
        if params.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: params.len(),
            });
        }
        Ok(())
    }

    pub fn seed_point(&self, params: &[f64]) -> Result<Point> {
        self.check_params(params)?;
        match self.seed {
            Seed::Point(c) => Ok(c),
            Seed::PointsOnLine(axis) => Ok(axis.foot() + axis.direction() * params[0]),
            Seed::AnyPoint => Ok(Point::new(params[0], params[1])),
            _ => Err(Error::Invalid("family is seeded by lines".into())),
        }
    }

    pub fn seed_line(&self, params: &[f64]) -> Result<CoorientedLine> {
        self.check_params(params)?;
        match self.seed {
            Seed::Line(l) => Ok(l),
            Seed::PerpendicularPencil(axis) => Ok(perpendicular_line(&axis, params[0])),
            Seed::PointPencil(c) => Ok(CoorientedLine::through(&c, params[0])),
            Seed::ParallelPencil(alpha) => Ok(CoorientedLine::new(alpha, params[0])),
            Seed::AnyLine => Ok(CoorientedLine::new(params[0], params[1])),
            _ => Err(Error::Invalid("family is seeded by points".into())),
        }
    }

    /// The involute for the given family parameters.
    pub fn member(&self, params: &[f64]) -> Result<Polygon> {
        match self.construction {
            Construction::P => p_involute_chain(&self.base, self.seed_point(params)?, 1),
            Construction::A => a_involute_chain(&self.base, self.seed_line(params)?, 1),
        }
    }
}

fn perpendicular_line(axis: &CoorientedLine, t: f64) -> CoorientedLine {
    let d = axis.direction();
    CoorientedLine::new(d.y.atan2(d.x), t)
}

fn closure_scale(q: &Polygon) -> f64 {
    1.0 + q.supports().iter().fold(0.0_f64, |m, p| m.max(p.abs()))
}

/// Reflects `seed` through the sides of `q`, `k` full rounds, without checking closure.
fn p_involute_chain(q: &Polygon, seed: Point, k: usize) -> Result<Polygon> {
    let n = q.len();
    let mut w = seed;
    let mut lines = Vec::with_capacity(k * n);
    for i in 0..k * n {
        let m = q.line(i);
        let next = reflect_point(m, &w);
        let alpha = m.alpha() - FRAC_PI_2;
        let mid = (w + next) / 2.0;
        lines.push(CoorientedLine::through(&mid, alpha));
        w = next;
    }
    Polygon::new(lines)
}

/// Reflects `seed` through the sides of `q`, `k` full rounds, without checking closure.
fn a_involute_chain(q: &Polygon, seed: CoorientedLine, k: usize) -> Result<Polygon> {
    let n = q.len();
    let mut l = seed;
    let mut lines = Vec::with_capacity(k * n);
    for i in 0..k * n {
        lines.push(l);
        l = reflect_line(q.line(i), &l);
    }
    Polygon::new(lines)
}

/// The `kn`-gon whose vertices are the images of a `k`-periodic point of the reflection composition.
pub fn p_involute_from_seed(q: &Polygon, seed: Point, k: usize) -> Result<Polygon> {
    let mut w = seed;
    for i in 0..k * q.len() {
        w = reflect_point(q.line(i), &w);
    }
    let tol = EPS_ISO * (closure_scale(q) + seed.norm());
    if (w - seed).norm() > tol {
        return Err(Error::Invalid(format!("seed is not {k}-periodic")));
    }
    p_involute_chain(q, seed, k)
}

/// The `kn`-gon whose sides are the images of a `k`-periodic line of the reflection composition.
pub fn a_involute_from_seed(q: &Polygon, seed: CoorientedLine, k: usize) -> Result<Polygon> {
    let mut l = seed;
    for i in 0..k * q.len() {
        l = reflect_line(q.line(i), &l);
    }
    let tol = EPS_ISO * (closure_scale(q) + seed.p().abs());
    if !l.same_point_set(&seed, tol) {
        return Err(Error::Invalid(format!("seed line is not {k}-periodic")));
    }
    a_involute_chain(q, seed, k)
}

fn axis_of(iso: &Isometry) -> Result<CoorientedLine> {
    match iso {
        Isometry::Reflection { axis } | Isometry::Glide { axis, .. } => Ok(*axis),
        _ => Err(Error::Invalid("odd composition must reverse orientation".into())),
    }
}

/// Root of the affine function `f` on the real line.
fn affine_root(f: impl Fn(f64) -> Result<f64>, slope_tol: f64) -> Result<f64> {
    let f0 = f(0.0)?;
    let slope = f(1.0)? - f0;
    if slope.abs() < slope_tol {
        return Err(Error::NoEvolvent(NoEvolventReason::DegenerateFamily));
    }
    Ok(-f0 / slope)
}

fn require_zero_qp(q: &Polygon) -> Result<()> {
    if q.quasiperimeter()?.abs() > eps_qp(&q.supports()) {
        return Err(Error::NoEvolvent(NoEvolventReason::NonzeroQuasiperimeter));
    }
    Ok(())
}

pub fn p_involute_family(q: &Polygon) -> Result<InvoluteFamily> {
    let iso = compose_reflections(q.lines())?;
    let (kind, seed) = match iso {
        Isometry::Rotation { center, .. } => (FamilyKind::Unique, Seed::Point(center)),
        Isometry::Identity => (FamilyKind::TwoParameter, Seed::AnyPoint),
        Isometry::Reflection { axis } => (FamilyKind::OneParameter, Seed::PointsOnLine(axis)),
        Isometry::Translation { .. } | Isometry::Glide { .. } => (FamilyKind::None, Seed::None),
    };
    Ok(InvoluteFamily {
        construction: Construction::P,
        kind,
        seed,
        isometry: iso,
        evolvent: p_evolvent(q).ok(),
        base: q.clone(),
    })
}

/// The distinguished P-involute that can itself be inverted again.
pub fn p_evolvent(q: &Polygon) -> Result<Polygon> {
    let n = q.len();
    let iso = compose_reflections(q.lines())?;
    if n % 2 == 1 {
        require_zero_qp(q)?;
        let axis = axis_of(&iso)?;
        let member = |t: f64| p_involute_chain(q, axis.foot() + axis.direction() * t, 1);
        let t = affine_root(|t| member(t)?.quasiperimeter(), eps_qp(&q.supports()))?;
        return member(t);
    }
    match iso {
        Isometry::Rotation { center, .. } => p_involute_chain(q, center, 1),
        Isometry::Translation { .. } => Err(Error::NoEvolvent(NoEvolventReason::Translation)),
        Isometry::Identity => {
            // The involute's own composition is a translation, affine in the seed.
            let shift = |w: Point| -> Result<Point> {
                Ok(reflection_product(p_involute_chain(q, w, 1)?.lines()).offset)
            };
            let t0 = shift(Point::zeros())?;
            let a = Matrix2::from_columns(&[
                shift(Point::new(1.0, 0.0))? - t0,
                shift(Point::new(0.0, 1.0))? - t0,
            ]);
            let norm = a.norm();
            if a.determinant().abs() <= 1e-10 * norm * norm {
                return Err(Error::NoEvolvent(NoEvolventReason::DegenerateFamily));
            }
            let w = a.try_inverse().expect("checked determinant") * (-t0);
            p_involute_chain(q, w, 1)
        }
        _ => Err(Error::Invalid("even composition must preserve orientation".into())),
    }
}

pub fn a_involute_family(q: &Polygon) -> Result<InvoluteFamily> {
    let iso = compose_reflections(q.lines())?;
    let mut evolvent = None;
    let (kind, seed) = match iso {
        Isometry::Glide { axis, .. } => {
            evolvent = a_involute_chain(q, axis, 1).ok();
            (FamilyKind::Unique, Seed::Line(axis))
        }
        Isometry::Reflection { axis } => {
            evolvent = a_involute_chain(q, axis, 1).ok();
            (FamilyKind::OneParameter, Seed::PerpendicularPencil(axis))
        }
        Isometry::Rotation { center, angle } => {
            if (angle.abs() - PI).abs() <= EPS_ANGLE {
                (FamilyKind::OneParameter, Seed::PointPencil(center))
            } else {
                (FamilyKind::None, Seed::None)
            }
        }
        Isometry::Translation { vector } => (
            FamilyKind::OneParameter,
            Seed::ParallelPencil(vector.y.atan2(vector.x) + FRAC_PI_2),
        ),
        Isometry::Identity => (FamilyKind::TwoParameter, Seed::AnyLine),
    };
    Ok(InvoluteFamily {
        construction: Construction::A,
        kind,
        seed,
        isometry: iso,
        evolvent,
        base: q.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Seeded by the axis of the composition.
    Odd,
    /// The zero-quasiperimeter member of the perpendicular pencil.
    Even,
}

/// A-evolvent of an odd-gon.
///
/// Equiangular input takes a direct route through the support numbers: reflecting lines
/// would perturb the angles, and the inverse of angle averaging amplifies such errors
/// by up to `1/|cos(π(n−1)/2n)|` per step.
pub fn a_evolvent(q: &Polygon, parity: Parity) -> Result<Polygon> {
    let n = q.len();
    if n.is_multiple_of(2) {
        return Err(Error::EvenGon(n));
    }
    let axis = axis_of(&compose_reflections(q.lines())?)?;
    match parity {
        Parity::Odd => a_involute_chain(q, axis, 1),
        Parity::Even if is_equiangular(q) => a_evolvent_equiangular(q),
        Parity::Even => a_evolvent_pencil(q, &axis),
    }
}

fn a_evolvent_pencil(q: &Polygon, axis: &CoorientedLine) -> Result<Polygon> {
    require_zero_qp(q)?;
    let member = |t: f64| a_involute_chain(q, perpendicular_line(axis, t), 1);
    let t = affine_root(|t| member(t)?.quasiperimeter(), eps_qp(&q.supports()))?;
    member(t)
}

fn is_equiangular(q: &Polygon) -> bool {
    let (theta, turns) = q.turning_angles();
    let step = std::f64::consts::TAU / q.len() as f64;
    turns == 1 && theta.iter().all(|t| (t - step).abs() <= EPS_ANGLE)
}

/// Solves `(p_{j+1} − p_j) / (2 sin(π/n)) = q_j` with zero mean.
fn a_evolvent_equiangular(q: &Polygon) -> Result<Polygon> {
    require_zero_qp(q)?;
    let n = q.len();
    let s = 2.0 * (PI / n as f64).sin();
    let mut p = vec![0.0; n];
    for j in 1..n {
        p[j] = p[j - 1] + s * q.line(j - 1).p();
    }
    let mean = p.iter().sum::<f64>() / n as f64;
    let alpha: Vec<f64> = q.alphas().iter().map(|a| a - PI / n as f64 - FRAC_PI_2).collect();
    let p: Vec<f64> = p.iter().map(|x| x - mean).collect();
    Polygon::from_parts(&alpha, &p)
}

/// Largest deviation between the P-evolute of `p` and `q` repeated around `p`.
pub fn p_round_trip_residual(p: &Polygon, q: &Polygon) -> Result<f64> {
    let e = p_evolute_transform(p)?;
    Ok(e.lines()
        .iter()
        .enumerate()
        .map(|(i, l)| line_distance(l, q.line(i)))
        .fold(0.0, f64::max))
}

/// Largest deviation of the sides of `q` from the nearest angle bisector at the vertices of `p`.
pub fn a_round_trip_residual(p: &Polygon, q: &Polygon) -> Result<f64> {
    let mut worst = 0.0_f64;
    for i in 0..p.len() {
        let (a, b) = (p.line(i), p.line(i + 1));
        let m = q.line(i);
        let d = [Bisector::Interior, Bisector::Exterior]
            .iter()
            .map(|kind| bisector(a, b, *kind).map(|l| unoriented_distance(&l, m)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    Ok(worst)
}

fn line_distance(a: &CoorientedLine, b: &CoorientedLine) -> f64 {
    reduce_angle(a.alpha() - b.alpha()).abs().max((a.p() - b.p()).abs())
}

fn unoriented_distance(a: &CoorientedLine, b: &CoorientedLine) -> f64 {
    line_distance(a, b).min(line_distance(a, &b.reversed()))
}

/// For each vertex of `p`, whether the matching side of `q` bisects the interior or the
/// exterior angle there, with `p` cyclically oriented.
pub fn bisector_parity(p: &Polygon, q: &Polygon) -> Result<Vec<Bisector>> {
    let n = p.len();
    let v = p.vertices();
    let scale = 1.0 + v.iter().fold(0.0_f64, |m, x| m.max(x.norm()));
    let dirs = (0..n)
        .map(|j| {
            let d = v[j] - v[(j + n - 1) % n];
            if d.norm() <= EPS_ISO * scale {
                Err(Error::CoincidentVertices((j + n - 1) % n, j))
            } else {
                Ok(d.normalize())
            }
        })
        .collect::<Result<Vec<Point>>>()?;
    Ok((0..n)
        .map(|j| {
            let e = q.line(j).normal();
            let r = dirs[j] - e * (2.0 * dirs[j].dot(&e));
            if r.dot(&dirs[(j + 1) % n]) < 0.0 {
                Bisector::Interior
            } else {
                Bisector::Exterior
            }
        })
        .collect())
}

/// Best rational approximation `h/k` of `x` with `k ≤ max_den`, if within `tol`.
pub fn rational_approximation(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    let (mut h0, mut h1) = (1_i64, x.floor() as i64);
    let (mut k0, mut k1) = (0_u64, 1_u64);
    let mut frac = x - x.floor();
    loop {
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some((h1, k1));
        }
        if frac.abs() < 1e-15 {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let k2 = a as u64 * k1 + k0;
        if k2 > max_den {
            return None;
        }
        let h2 = a as i64 * h1 + h0;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
}

/// Smallest `k` with `k·angle ≡ 0 (mod 2π)`, detected with denominators up to 64.
pub fn rotation_period(angle: f64) -> Option<u64> {
    let (h, k) = rational_approximation(angle / PI, 64, 1e-9)?;
    let g = if h % 2 == 0 { 2 } else { 1 };
    Some(2 * k / g)
}

fn check_odd(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewSides(n));
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenGon(n));
    }
    Ok(())
}

/// `α*_i = α_i − α_{i+1} + α_{i+2} − … + α_{i+n−1}`, reduced to `[0, π)`.
pub fn pedal_angle_map(alpha: &[f64]) -> Result<Vec<f64>> {
    let n = alpha.len();
    check_odd(n)?;
    Ok((0..n)
        .map(|i| {
            let s: f64 = (0..n)
                .map(|t| if t % 2 == 0 { alpha[(i + t) % n] } else { -alpha[(i + t) % n] })
                .sum();
            s.rem_euclid(PI)
        })
        .collect())
}

/// The circulant integer matrix of the pedal angle map.
pub fn pedal_matrix(n: usize) -> Result<DMatrix<f64>> {
    check_odd(n)?;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if ((j + n - i) % n).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }))
}

/// `2 / (1 + ω^k)` for `k = 0..n`, `ω = e^{2πi/n}`.
pub fn ergodic_spectrum(n: usize) -> Result<Vec<Complex<f64>>> {
    check_odd(n)?;
    Ok((0..n)
        .map(|k| {
            let w = Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
            Complex::new(2.0, 0.0) / (Complex::new(1.0, 0.0) + w)
        })
        .collect())
}

/// Visit counts of the pedal orbit on the quotient torus, `bins` cells per coordinate
/// `α_i − α_0 (mod π)`, `i = 1..n`.
pub fn pedal_histogram(start: &[f64], steps: usize, bins: usize) -> Result<Vec<u64>> {
    let n = start.len();
    check_odd(n)?;
    let dims = n - 1;
    let mut counts = vec![0_u64; bins.pow(dims as u32)];
    let mut alpha = start.to_vec();
    for _ in 0..steps {
        alpha = pedal_angle_map(&alpha)?;
        let mut cell = 0;
        for i in 1..n {
            let x = (alpha[i] - alpha[0]).rem_euclid(PI) / PI;
            let b = ((x * bins as f64) as usize).min(bins - 1);
            cell = cell * bins + b;
        }
        counts[cell] += 1;
    }
    Ok(counts)
}
