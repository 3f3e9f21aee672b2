//! Smooth hedgehogs given by trigonometric-polynomial support functions.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Support function `Σ a_k cos(kα/q) + b_k sin(kα/q)`, optionally plus the cycloidal
/// term `−α cos α`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SupportPoly {
    q: u32,
    coeffs: BTreeMap<u32, (f64, f64)>,
    cycloidal: bool,
}

impl SupportPoly {
    /// # Panics
    /// If `q` is zero.
    pub fn new(q: u32) -> Self {
        assert!(q > 0, "denominator must be positive");
        Self {
            q,
            coeffs: BTreeMap::new(),
            cycloidal: false,
        }
    }

    /// `−α cos α + f(α)` for a 2π-periodic `f`.
    pub fn cycloidal(f: SupportPoly) -> Result<Self> {
        if f.q != 1 || f.cycloidal {
            return Err(Error::NotPeriodic(f.q));
        }
        Ok(Self {
            cycloidal: true,
            ..f
        })
    }

    pub fn with_term(mut self, k: u32, a: f64, b: f64) -> Self {
        self.set(k, a, b);
        self
    }

    pub fn set(&mut self, k: u32, a: f64, b: f64) {
        if a == 0.0 && b == 0.0 {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, (a, b));
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_cycloidal(&self) -> bool {
        self.cycloidal
    }

    pub fn coeff(&self, k: u32) -> (f64, f64) {
        self.coeffs.get(&k).copied().unwrap_or((0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, f64, f64)> + '_ {
        self.coeffs.iter().map(|(&k, &(a, b))| (k, a, b))
    }

    /// The 2π-periodic part, dropping the cycloidal term.
    pub fn periodic_part(&self) -> SupportPoly {
        Self {
            cycloidal: false,
            ..self.clone()
        }
    }

    /// Harmonic index of a plane translation: `k = q`.
    pub fn translation_index(&self) -> u32 {
        self.q
    }

    /// Only odd `k` with odd `q`: `p(α + qπ) = −p(α)`.
    pub fn is_skew_periodic(&self) -> bool {
        !self.cycloidal && self.q % 2 == 1 && self.coeffs.keys().all(|k| k % 2 == 1)
    }

    pub fn mean(&self) -> f64 {
        self.coeff(0).0
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coeffs
            .values()
            .fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b)))
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        let mut v: f64 = self
            .terms()
            .map(|(k, a, b)| {
                let x = k as f64 * alpha / self.q as f64;
                a * x.cos() + b * x.sin()
            })
            .sum();
        if self.cycloidal {
            v -= alpha * alpha.cos();
        }
        v
    }

    pub fn derivative(&self, alpha: f64) -> f64 {
        let mut v: f64 = self
            .terms()
            .map(|(k, a, b)| {
                let w = k as f64 / self.q as f64;
                let x = w * alpha;
                w * (b * x.cos() - a * x.sin())
            })
            .sum();
        if self.cycloidal {
            v -= alpha.cos() - alpha * alpha.sin();
        }
        v
    }

    /// Point of tangency of the support line with normal direction `alpha`.
    pub fn curve_point(&self, alpha: f64) -> Point {
        let (p, dp) = (self.eval(alpha), self.derivative(alpha));
        let (s, c) = alpha.sin_cos();
        Point::new(p * c - dp * s, p * s + dp * c)
    }

    fn map_terms(&self, f: impl Fn(u32, f64, f64) -> (f64, f64)) -> SupportPoly {
        let mut out = SupportPoly {
            q: self.q,
            coeffs: BTreeMap::new(),
            cycloidal: self.cycloidal,
        };
        for (k, a, b) in self.terms() {
            let (a2, b2) = f(k, a, b);
            out.set(k, a2, b2);
        }
        out
    }
}

/// `(cos, sin)` of `kπ/(2q)`, exact when the angle is a multiple of `π/2`.
fn quarter_shift(k: u32, q: u32) -> (f64, f64) {
    if k.is_multiple_of(q) {
        match (k / q) % 4 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        let d = k as f64 / q as f64 * FRAC_PI_2;
        (d.cos(), d.sin())
    }
}

/// `p ↦ p′(α − π/2)` applied to the periodic harmonics.
fn shifted_derivative(s: &SupportPoly) -> SupportPoly {
    s.map_terms(|k, a, b| {
        let w = k as f64 / s.q as f64;
        let (c, sn) = quarter_shift(k, s.q);
        (w * (a * sn + b * c), w * (b * sn - a * c))
    })
}

fn shifted_antiderivative(s: &SupportPoly) -> SupportPoly {
    s.map_terms(|k, a, b| {
        let w = k as f64 / s.q as f64;
        let (c, sn) = quarter_shift(k, s.q);
        ((sn * a - c * b) / w, (c * a + sn * b) / w)
    })
}

/// Cycloidal correction `(π/2) cos α − sin α` picked up by the periodic part.
fn cycloid_drift() -> SupportPoly {
    SupportPoly::new(1).with_term(1, FRAC_PI_2, -1.0)
}

fn add(a: &SupportPoly, b: &SupportPoly) -> SupportPoly {
    let mut out = a.clone();
    for (k, x, y) in b.terms() {
        let (u, v) = out.coeff(k);
        out.set(k, u + x, v + y);
    }
    out
}

fn check_zero_mean(s: &SupportPoly) -> Result<()> {
    let m = s.mean();
    if m.abs() > 1e-12 * (1.0 + s.max_magnitude()) {
        return Err(Error::NonzeroLength(m));
    }
    Ok(())
}

/// Support function of the evolute, `p′(α − π/2)`.
pub fn evolute_smooth(s: &SupportPoly) -> SupportPoly {
    if s.cycloidal {
        let f = cycloid_step(&s.periodic_part()).expect("periodic part has q = 1");
        return SupportPoly { cycloidal: true, ..f };
    }
    shifted_derivative(s)
}

/// The unique zero-mean involute.
pub fn evolvent_smooth(s: &SupportPoly) -> Result<SupportPoly> {
    check_zero_mean(s)?;
    let mut periodic = s.periodic_part();
    periodic.coeffs.remove(&0);
    if s.cycloidal {
        let f = cycloid_step_inverse(&periodic)?;
        return Ok(SupportPoly { cycloidal: true, ..f });
    }
    Ok(shifted_antiderivative(&periodic))
}

/// Curvature centroid; the first-harmonic coefficients.
pub fn steiner_point_smooth(s: &SupportPoly) -> Result<Point> {
    if s.q != 1 || s.cycloidal {
        return Err(Error::NotPeriodic(s.q));
    }
    let (a, b) = s.coeff(1);
    Ok(Point::new(a, b))
}

/// Action of the evolute on the periodic part `f` of `−α cos α + f(α)`.
pub fn cycloid_step(f: &SupportPoly) -> Result<SupportPoly> {
    if f.q != 1 || f.cycloidal {
        return Err(Error::NotPeriodic(f.q));
    }
    Ok(add(&shifted_derivative(f), &cycloid_drift()))
}

/// Inverse of [`cycloid_step`] on zero-mean periodic parts.
pub fn cycloid_step_inverse(g: &SupportPoly) -> Result<SupportPoly> {
    if g.q != 1 || g.cycloidal {
        return Err(Error::NotPeriodic(g.q));
    }
    check_zero_mean(g)?;
    let mut h = add(g, &cycloid_drift().map_terms(|_, a, b| (-a, -b)));
    h.coeffs.remove(&0);
    Ok(shifted_antiderivative(&h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothMode {
    Evolute,
    Evolvent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothTrace {
    /// Normalized iterates, starting with the normalized input.
    pub shapes: Vec<SupportPoly>,
    /// Dominant harmonic numerator `k` per iterate, ignoring constants and translations.
    pub dominant: Vec<Option<u32>>,
}

/// Shape representative: translation harmonic removed, then scaled to unit largest
/// harmonic. Cycloidal curves are not rescaled, their drift term fixes the scale.
pub fn normalize_smooth(s: &SupportPoly) -> SupportPoly {
    let mut out = s.clone();
    out.coeffs.remove(&s.translation_index());
    if s.cycloidal {
        return out;
    }
    let m = out.max_magnitude();
    if m > 0.0 {
        out = out.map_terms(|_, a, b| (a / m, b / m));
    }
    out
}

pub fn dominant_harmonic(s: &SupportPoly) -> Option<u32> {
    s.terms()
        .filter(|(k, _, _)| *k != 0 && *k != s.translation_index())
        .map(|(k, a, b)| (k, a.hypot(b)))
        .filter(|(_, m)| *m > 0.0)
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(k, _)| k)
}

pub fn iterate_smooth(s: &SupportPoly, steps: usize, mode: SmoothMode) -> Result<SmoothTrace> {
    let mut current = normalize_smooth(s);
    let mut shapes = vec![current.clone()];
    for _ in 0..steps {
        let next = match mode {
            SmoothMode::Evolute => evolute_smooth(&current),
            SmoothMode::Evolvent => evolvent_smooth(&current)?,
        };
        current = normalize_smooth(&next);
        shapes.push(current.clone());
    }
    let dominant = shapes.iter().map(dominant_harmonic).collect();
    Ok(SmoothTrace { shapes, dominant })
}

/// Full period of the curve parameter: `2πq`.
pub fn parameter_period(s: &SupportPoly) -> f64 {
    2.0 * PI * s.q as f64
}
