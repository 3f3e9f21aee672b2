//! Discrete Fourier analysis of equiangular polygons.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{reduce_angle, Point, Polygon, EPS_ANGLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicKind {
    Cos,
    Sin,
}

/// Directions `2πj/n` for `j = 1..=n`.
pub fn equiangular_directions(n: usize) -> Vec<f64> {
    (1..=n).map(|j| TAU * j as f64 / n as f64).collect()
}

/// Support numbers `cos(2πmj/n)` or `sin(2πmj/n)`, `j = 1..=n`, for any `m`.
pub fn harmonic_support(n: usize, m: usize, kind: HarmonicKind) -> Vec<f64> {
    (1..=n)
        .map(|j| {
            let x = TAU * ((m * j) % n) as f64 / n as f64;
            match kind {
                HarmonicKind::Cos => x.cos(),
                HarmonicKind::Sin => x.sin(),
            }
        })
        .collect()
}

pub fn harmonic_polygon(n: usize, m: usize, kind: HarmonicKind) -> Result<Polygon> {
    let in_range = match kind {
        HarmonicKind::Cos => 2 * m <= n,
        HarmonicKind::Sin => m > 0 && 2 * m < n,
    };
    if !in_range {
        return Err(Error::IndexOutOfRange { n, m });
    }
    Polygon::from_parts(&equiangular_directions(n), &harmonic_support(n, m, kind))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicTerm {
    pub m: usize,
    pub a: f64,
    pub b: f64,
}

impl HarmonicTerm {
    pub fn magnitude(&self) -> f64 {
        self.a.hypot(self.b)
    }
}

/// `p = (a0/2)·C_0 + Σ (a_m C_m + b_m S_m) + (a_half/2)·C_{n/2}`, where line `i` has
/// direction `base_alpha + 2π(i+1)/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicDecomposition {
    pub n: usize,
    pub base_alpha: f64,
    pub a0: f64,
    pub terms: Vec<HarmonicTerm>,
    pub a_half: Option<f64>,
}

impl HarmonicDecomposition {
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.n;
        let mut p = vec![self.a0 / 2.0; n];
        for t in &self.terms {
            let c = harmonic_support(n, t.m, HarmonicKind::Cos);
            let s = harmonic_support(n, t.m, HarmonicKind::Sin);
            for j in 0..n {
                p[j] += t.a * c[j] + t.b * s[j];
            }
        }
        if let Some(h) = self.a_half {
            for (j, pj) in p.iter_mut().enumerate() {
                *pj += if j % 2 == 0 { -h / 2.0 } else { h / 2.0 };
            }
        }
        p
    }

    pub fn polygon(&self) -> Result<Polygon> {
        let alpha: Vec<f64> = equiangular_directions(self.n)
            .iter()
            .map(|a| a + self.base_alpha)
            .collect();
        Polygon::from_parts(&alpha, &self.reconstruct())
    }

    /// Euclidean norm of the order-`m` part of the support vector.
    pub fn order_norm(&self, m: usize) -> f64 {
        let n = self.n as f64;
        if m == 0 {
            return (self.a0 / 2.0).abs() * n.sqrt();
        }
        if 2 * m == self.n {
            return self.a_half.map_or(0.0, |h| (h / 2.0).abs() * n.sqrt());
        }
        self.terms
            .iter()
            .find(|t| t.m == m)
            .map_or(0.0, |t| t.magnitude() * (n / 2.0).sqrt())
    }

    /// Norm of everything outside `orders`, relative to the norm of everything outside `ignore`.
    pub fn residual_outside(&self, orders: &[usize], ignore: &[usize]) -> f64 {
        let sq = |m: &usize| self.order_norm(*m).powi(2);
        let kept: Vec<usize> = (0..=self.n / 2).filter(|m| !ignore.contains(m)).collect();
        let total: f64 = kept.iter().map(sq).sum();
        let outside: f64 = kept.iter().filter(|m| !orders.contains(m)).map(sq).sum();
        if total == 0.0 {
            0.0
        } else {
            (outside / total).sqrt()
        }
    }

    /// Order with the largest norm among `1..=n/2`, skipping `skip`.
    pub fn dominant_order(&self, skip: &[usize]) -> usize {
        (1..=self.n / 2)
            .filter(|m| !skip.contains(m))
            .max_by(|a, b| self.order_norm(*a).total_cmp(&self.order_norm(*b)))
            .unwrap_or(0)
    }
}

pub fn decompose_equiangular(poly: &Polygon) -> Result<HarmonicDecomposition> {
    let n = poly.len();
    let step = TAU / n as f64;
    let (theta, _) = poly.turning_angles();
    if theta.iter().any(|t| (t - step).abs() > EPS_ANGLE) {
        return Err(Error::NotEquiangular);
    }
    let base_alpha = reduce_angle(poly.line(0).alpha() - step);
    let p = poly.supports();
    let project = |m: usize, kind| {
        harmonic_support(n, m, kind)
            .iter()
            .zip(&p)
            .map(|(h, x)| h * x)
            .sum::<f64>()
            * 2.0
            / n as f64
    };
    let terms = (1..n.div_ceil(2))
        .map(|m| HarmonicTerm {
            m,
            a: project(m, HarmonicKind::Cos),
            b: project(m, HarmonicKind::Sin),
        })
        .collect();
    Ok(HarmonicDecomposition {
        n,
        base_alpha,
        a0: project(0, HarmonicKind::Cos),
        terms,
        a_half: n.is_multiple_of(2).then(|| project(n / 2, HarmonicKind::Cos)),
    })
}

pub fn vertex_centroid(poly: &Polygon) -> Point {
    poly.vertices().iter().sum::<Point>() / poly.len() as f64
}

/// Turning-angle weighted vertex average of a convex polygon.
pub fn classical_steiner(poly: &Polygon) -> Result<Point> {
    let (theta, _) = poly.turning_angles();
    if theta.iter().any(|t| *t <= 0.0) || poly.side_lengths().iter().any(|l| *l <= 0.0) {
        return Err(Error::NotConvex);
    }
    Ok(poly
        .vertices()
        .iter()
        .zip(&theta)
        .map(|(v, t)| v * *t)
        .sum::<Point>()
        / TAU)
}
