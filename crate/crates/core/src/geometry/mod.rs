//! Cooriented lines, polygons built from them, and planar isometries.

mod isometry;

pub use isometry::{compose_reflections, reflection_product, Affine2, Isometry};

use std::f64::consts::{PI, TAU};

use nalgebra::Vector2;

use crate::error::{Error, Result};

pub type Point = Vector2<f64>;

/// Threshold on `|sin Δα|` below which two lines count as parallel.
pub const EPS_PARALLEL: f64 = 1e-9;
/// Absolute coordinate tolerance for isometry classification.
pub const EPS_ISO: f64 = 1e-9;
/// Tolerance on angle identities.
pub const EPS_ANGLE: f64 = 1e-9;

/// Quasiperimeter-zero tolerance, relative to the support numbers.
pub fn eps_qp(p: &[f64]) -> f64 {
    let max = p.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    1e-8 * (1.0 + max)
}

/// Representative of `x` in `[0, 2π)`.
pub fn canonical_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Representative of `x` in `(-π, π]`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x - TAU * (x / TAU).round();
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Unit vector at angle `a`.
pub fn unit(a: f64) -> Point {
    Point::new(a.cos(), a.sin())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoorientedLine {
    alpha: f64,
    p: f64,
}

impl CoorientedLine {
    pub fn new(alpha: f64, p: f64) -> Self {
        Self {
            alpha: canonical_angle(alpha),
            p,
        }
    }

    /// Line with normal direction `alpha` passing through `u`.
    pub fn through(u: &Point, alpha: f64) -> Self {
        Self::new(alpha, u.dot(&unit(alpha)))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Coorienting unit normal.
    pub fn normal(&self) -> Point {
        unit(self.alpha)
    }

    /// Orienting vector, the normal turned a quarter counterclockwise.
    pub fn direction(&self) -> Point {
        Point::new(-self.alpha.sin(), self.alpha.cos())
    }

    /// Foot of the perpendicular from the origin.
    pub fn foot(&self) -> Point {
        self.normal() * self.p
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.alpha + PI, -self.p)
    }

    pub fn signed_distance(&self, u: &Point) -> f64 {
        u.dot(&self.normal()) - self.p
    }

    pub fn translated(&self, v: &Point) -> Self {
        Self::new(self.alpha, self.p + v.dot(&self.normal()))
    }

    /// Image under `u ↦ s·u`. Negative `s` keeps the coorientation angle.
    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.alpha, self.p * s)
    }

    /// Same oriented line up to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        reduce_angle(self.alpha - other.alpha).abs() <= tol && (self.p - other.p).abs() <= tol
    }

    /// Same point set up to `tol`, ignoring coorientation.
    pub fn same_point_set(&self, other: &Self, tol: f64) -> bool {
        self.approx_eq(other, tol) || self.approx_eq(&other.reversed(), tol)
    }
}

/// Intersection of two lines.
pub fn vertex(a: &CoorientedLine, b: &CoorientedLine) -> Result<Point> {
    let s = (b.alpha - a.alpha).sin();
    if s.abs() <= EPS_PARALLEL {
        return Err(Error::ParallelLines(0, 1));
    }
    Ok(vertex_unchecked(a, b, s))
}

fn vertex_unchecked(a: &CoorientedLine, b: &CoorientedLine, sin_turn: f64) -> Point {
    let (sa, ca) = a.alpha.sin_cos();
    let (sb, cb) = b.alpha.sin_cos();
    Point::new(
        (a.p * sb - b.p * sa) / sin_turn,
        (b.p * ca - a.p * cb) / sin_turn,
    )
}

pub fn reflect_point(mirror: &CoorientedLine, u: &Point) -> Point {
    let e = mirror.normal();
    u - e * (2.0 * (u.dot(&e) - mirror.p))
}

/// Image of `l` under reflection in `mirror`, with the orientation carried along.
pub fn reflect_line(mirror: &CoorientedLine, l: &CoorientedLine) -> CoorientedLine {
    let alpha = 2.0 * mirror.alpha - l.alpha;
    let image = reflect_point(mirror, &l.foot());
    CoorientedLine::through(&image, alpha)
}

/// Turning angles in `(-π, π]` between consecutive directions, and the total turning number.
pub fn turning_angles(alpha: &[f64]) -> Result<(Vec<f64>, i64)> {
    let n = alpha.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let theta: Vec<f64> = (0..n)
        .map(|j| reduce_angle(alpha[(j + 1) % n] - alpha[j]))
        .collect();
    if let Some(j) = theta.iter().position(|t| t.sin().abs() <= EPS_PARALLEL) {
        return Err(Error::DegenerateTurning(j));
    }
    let total: f64 = theta.iter().sum();
    Ok((theta, (total / TAU).round() as i64))
}

/// Alternating sums of directions: the total `B` and, per index, `B_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingSums {
    pub total: f64,
    pub partial: Vec<f64>,
}

/// `B = α_0 − α_1 + α_2 − …` and `B_j = Σ_{i=1}^{n-1} (−1)^i α_{j+i}`, both in `[0, 2π)`.
///
/// `B_j` is computed for every `n`, but only carries geometric meaning for odd `n`.
pub fn alternating_sums(alpha: &[f64]) -> AlternatingSums {
    let n = alpha.len();
    let sign = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    let total = alpha.iter().enumerate().map(|(i, a)| sign(i) * a).sum();
    let partial = (0..n)
        .map(|j| {
            let s: f64 = (1..n).map(|i| sign(i) * alpha[(j + i) % n]).sum();
            canonical_angle(s)
        })
        .collect();
    AlternatingSums {
        total: canonical_angle(total),
        partial,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coorientation {
    /// Normals to the right of the traversal: outward for counterclockwise vertex order.
    Ccw,
    Cw,
}

/// A cyclic sequence of cooriented lines with no two consecutive lines parallel.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    lines: Vec<CoorientedLine>,
}

impl Polygon {
    pub fn new(lines: Vec<CoorientedLine>) -> Result<Self> {
        let n = lines.len();
        if n < 3 {
            return Err(Error::TooFewSides(n));
        }
        for j in 0..n {
            let k = (j + 1) % n;
            if (lines[k].alpha - lines[j].alpha).sin().abs() <= EPS_PARALLEL {
                return Err(Error::ParallelLines(j, k));
            }
        }
        Ok(Self { lines })
    }

    pub fn from_parts(alpha: &[f64], p: &[f64]) -> Result<Self> {
        if alpha.len() != p.len() {
            return Err(Error::LengthMismatch {
                expected: alpha.len(),
                got: p.len(),
            });
        }
        Self::new(
            alpha
                .iter()
                .zip(p)
                .map(|(&a, &p)| CoorientedLine::new(a, p))
                .collect(),
        )
    }

    /// Side `j` runs from vertex `j-1` to vertex `j`, so `vertices()` reproduces the input.
    pub fn from_vertices(vertices: &[Point], coorientation: Coorientation) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::TooFewSides(n));
        }
        let quarter = match coorientation {
            Coorientation::Ccw => -PI / 2.0,
            Coorientation::Cw => PI / 2.0,
        };
        let mut lines = Vec::with_capacity(n);
        for j in 0..n {
            let a = vertices[(j + n - 1) % n];
            let b = vertices[j];
            let d = b - a;
            if d.norm() <= EPS_ISO {
                return Err(Error::CoincidentVertices((j + n - 1) % n, j));
            }
            let alpha = d.y.atan2(d.x) + quarter;
            let mid = (a + b) * 0.5;
            lines.push(CoorientedLine::through(&mid, alpha));
        }
        Self::new(lines)
    }

    /// The `2n`-gon made of the lines followed by their reversals, used for half-integer turning.
    pub fn from_half_turn_lines(lines: &[CoorientedLine]) -> Result<Self> {
        let mut all = lines.to_vec();
        all.extend(lines.iter().map(CoorientedLine::reversed));
        Self::new(all)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[CoorientedLine] {
        &self.lines
    }

    pub fn line(&self, j: usize) -> &CoorientedLine {
        &self.lines[j % self.lines.len()]
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.lines.iter().map(|l| l.alpha).collect()
    }

    pub fn supports(&self) -> Vec<f64> {
        self.lines.iter().map(|l| l.p).collect()
    }

    /// Same directions, new support numbers.
    pub fn with_supports(&self, p: &[f64]) -> Result<Self> {
        Self::from_parts(&self.alphas(), p)
    }

    pub fn turning_angles(&self) -> (Vec<f64>, i64) {
        turning_angles(&self.alphas()).expect("validated polygon")
    }

    pub fn alternating_sums(&self) -> AlternatingSums {
        alternating_sums(&self.alphas())
    }

    /// Intersection of lines `j` and `j+1`.
    pub fn vertex(&self, j: usize) -> Point {
        let n = self.len();
        let a = &self.lines[j % n];
        let b = &self.lines[(j + 1) % n];
        vertex_unchecked(a, b, (b.alpha - a.alpha).sin())
    }

    pub fn vertices(&self) -> Vec<Point> {
        (0..self.len()).map(|j| self.vertex(j)).collect()
    }

    /// Signed side lengths measured along the orienting vectors.
    pub fn side_lengths(&self) -> Vec<f64> {
        let n = self.len();
        let v = self.vertices();
        (0..n)
            .map(|i| (v[i] - v[(i + n - 1) % n]).dot(&self.lines[i].direction()))
            .collect()
    }

    pub fn quasiperimeter(&self) -> Result<f64> {
        let n = self.len();
        if n.is_multiple_of(2) {
            return Err(Error::EvenGon(n));
        }
        let b = self.alternating_sums();
        Ok(self
            .lines
            .iter()
            .zip(&b.partial)
            .map(|(l, bj)| l.p * bj.sin())
            .sum())
    }

    pub fn translated(&self, v: &Point) -> Self {
        Self {
            lines: self.lines.iter().map(|l| l.translated(v)).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            lines: self.lines.iter().map(|l| l.scaled(s)).collect(),
        }
    }

    pub fn reversed_coorientation(&self) -> Self {
        Self {
            lines: self.lines.iter().map(CoorientedLine::reversed).collect(),
        }
    }

    /// Maximum distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let v = self.vertices();
        let mut d = 0.0_f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max((v[i] - v[j]).norm());
            }
        }
        d
    }

    /// Applies an isometry line by line.
    pub fn transformed(&self, iso: &Isometry) -> Result<Self> {
        Self::new(self.lines.iter().map(|l| iso.apply_line(l)).collect())
    }
}
