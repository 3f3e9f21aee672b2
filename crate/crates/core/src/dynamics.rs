//! Iterating polygon transforms: normalization, limit classification, homotheties.

use std::fmt;
use std::str::FromStr;

use crate::a_evolute::{a_c_evolute, a_o_lines};
use crate::error::{Error, Result};
use crate::geometry::{reduce_angle, Point, Polygon, EPS_ANGLE};
use crate::harmonics::decompose_equiangular;
use crate::involute::{a_evolvent, p_evolvent, Parity};
use crate::p_evolute::{p_evolute_transform, spectral_report, ModulusClass};

/// Relative tolerance for homothety detection.
pub const EPS_HOM: f64 = 1e-8;
/// Sup-distance below which two trace entries count as equal shapes.
pub const PERIOD_TOL: f64 = 1e-6;
pub const MAX_PERIOD: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    PEvolute,
    AoEvolute,
    AcEvolute,
    PEvolvent,
    AEvolvent(Parity),
}

impl Transform {
    pub fn apply(&self, poly: &Polygon) -> Result<Polygon> {
        match self {
            Transform::PEvolute => p_evolute_transform(poly),
            Transform::AoEvolute => a_o_lines(poly),
            Transform::AcEvolute => a_c_evolute(poly),
            Transform::PEvolvent => p_evolvent(poly),
            Transform::AEvolvent(parity) => a_evolvent(poly, *parity),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Transform::PEvolute => "p_evolute",
            Transform::AoEvolute => "a_o_evolute",
            Transform::AcEvolute => "a_c_evolute",
            Transform::PEvolvent => "p_evolvent",
            Transform::AEvolvent(Parity::Even) => "a_evolvent",
            Transform::AEvolvent(Parity::Odd) => "a_evolvent_odd",
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "p_evolute" => Transform::PEvolute,
            "a_o_evolute" => Transform::AoEvolute,
            "a_c_evolute" => Transform::AcEvolute,
            "p_evolvent" => Transform::PEvolvent,
            "a_evolvent" | "a_evolvent_even" => Transform::AEvolvent(Parity::Even),
            "a_evolvent_odd" => Transform::AEvolvent(Parity::Odd),
            other => return Err(Error::Invalid(format!("unknown transform `{other}`"))),
        })
    }
}

fn centroid(v: &[Point]) -> Point {
    v.iter().sum::<Point>() / v.len() as f64
}

/// Vertex centroid moved to the origin, farthest vertex at distance 1.
pub fn normalize(poly: &Polygon) -> Result<Polygon> {
    Ok(normalize_with_scale(poly)?.0)
}

/// Normalized polygon, the scale that was divided out, and the centroid that was removed.
fn normalize_with_scale(poly: &Polygon) -> Result<(Polygon, f64, Point)> {
    let v = poly.vertices();
    let c = centroid(&v);
    let size = v.iter().fold(0.0_f64, |m, x| m.max(x.norm()));
    let spread = v.iter().fold(0.0_f64, |m, x| m.max((x - c).norm()));
    if !spread.is_finite() || spread <= 1e-10 * (1.0 + size) {
        return Err(Error::Collapsed);
    }
    Ok((poly.translated(&-c).scaled(1.0 / spread), spread, c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    RealPair,
    ImaginaryPair,
    ComplexQuadruple,
    /// The spectrum has a repeated maximal-modulus structure beyond the three cases.
    Degenerate,
    Collapsed,
    Terminated,
    Unclassified,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::RealPair => "real-pair",
            Classification::ImaginaryPair => "imaginary-pair",
            Classification::ComplexQuadruple => "complex-quadruple",
            Classification::Degenerate => "degenerate",
            Classification::Collapsed => "collapsed",
            Classification::Terminated => "terminated",
            Classification::Unclassified => "unclassified",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub transform: Transform,
    /// Normalized polygons, starting with the normalized input.
    pub steps: Vec<Polygon>,
    /// `ln` of the growth factor of each transform step.
    pub scale_log: Vec<f64>,
    /// Distance of each raw image's vertex centroid from the origin, in normalized units.
    pub centroid_drift: Vec<f64>,
    pub classification: Classification,
    pub period_estimate: Option<usize>,
    /// Smallest lag after which the shape repeats up to a rotation about the centroid.
    pub rotation_period: Option<RotationPeriod>,
    /// The event that stopped the iteration early.
    pub terminal: Option<Error>,
}

pub fn iterate(transform: Transform, poly: &Polygon, steps: usize) -> Result<IterationTrace> {
    let mut current = normalize(poly)?;
    let mut trace = IterationTrace {
        transform,
        steps: vec![current.clone()],
        scale_log: Vec::with_capacity(steps),
        centroid_drift: Vec::with_capacity(steps),
        classification: Classification::Unclassified,
        period_estimate: None,
        rotation_period: None,
        terminal: None,
    };
    for _ in 0..steps {
        match transform.apply(&current).and_then(|next| normalize_with_scale(&next)) {
            Ok((next, scale, c)) => {
                trace.scale_log.push(scale.ln());
                trace.centroid_drift.push(c.norm());
                trace.steps.push(next.clone());
                current = next;
            }
            Err(e) => {
                trace.terminal = Some(e);
                break;
            }
        }
    }
    trace.classification = match &trace.terminal {
        Some(Error::Collapsed) => Classification::Collapsed,
        Some(_) => Classification::Terminated,
        None if transform == Transform::PEvolute => {
            let (theta, _) = poly.turning_angles();
            match spectral_report(&theta) {
                Ok(r) => match r.max_modulus_class {
                    ModulusClass::RealPair => Classification::RealPair,
                    ModulusClass::ImaginaryPair => Classification::ImaginaryPair,
                    ModulusClass::ComplexQuadruple => Classification::ComplexQuadruple,
                    ModulusClass::Degenerate => Classification::Degenerate,
                },
                Err(_) => Classification::Unclassified,
            }
        }
        None => Classification::Unclassified,
    };
    trace.period_estimate = estimate_period(&trace.steps);
    trace.rotation_period = estimate_rotation_period(&trace.steps);
    Ok(trace)
}

/// Raw images `P, T(P), T²(P), …` without normalization, and the event that stopped them.
pub fn orbit(transform: Transform, poly: &Polygon, steps: usize) -> (Vec<Polygon>, Option<Error>) {
    let mut out = vec![poly.clone()];
    for _ in 0..steps {
        match transform.apply(out.last().expect("non-empty")) {
            Ok(next) => out.push(next),
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

/// Largest vertex distance, minimized over cyclic relabelings.
pub fn sup_distance(a: &Polygon, b: &Polygon) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let (va, vb) = (a.vertices(), b.vertices());
    let n = va.len();
    (0..n)
        .map(|s| {
            (0..n)
                .map(|j| (va[j] - vb[(j + s) % n]).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Smallest `q ≤ 12` for which the trailing quarter of `steps` repeats with period `q`.
pub fn estimate_period(steps: &[Polygon]) -> Option<usize> {
    let len = steps.len();
    let start = len - (len / 4).max(1);
    (1..=MAX_PERIOD).find(|&q| {
        let pairs: Vec<usize> = (start..len).filter(|i| i + q < len).collect();
        !pairs.is_empty()
            && pairs
                .iter()
                .all(|&i| sup_distance(&steps[i], &steps[i + q]) < PERIOD_TOL)
    })
}

/// Distance between vertex sets after the best rotation about the origin, minimized over
/// cyclic relabelings in either direction: `(distance, angle)` with `angle` taking `b`
/// onto `a`.
pub fn rotation_distance(a: &Polygon, b: &Polygon) -> (f64, f64) {
    if a.len() != b.len() {
        return (f64::INFINITY, 0.0);
    }
    let (va, vb) = (a.vertices(), b.vertices());
    let n = va.len();
    let mut best = (f64::INFINITY, 0.0);
    for reverse in [false, true] {
        for s in 0..n {
            let pick = |j: usize| if reverse { vb[(s + n - j) % n] } else { vb[(j + s) % n] };
            // Optimal angle from the complex inner product Σ conj(b)·a.
            let (mut re, mut im) = (0.0, 0.0);
            for (j, x) in va.iter().enumerate() {
                let y = pick(j);
                re += y.x * x.x + y.y * x.y;
                im += y.x * x.y - y.y * x.x;
            }
            let angle = im.atan2(re);
            let (c, sn) = (angle.cos(), angle.sin());
            let d = va
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    let y = pick(j);
                    (x - Point::new(c * y.x - sn * y.y, sn * y.x + c * y.y)).norm()
                })
                .fold(0.0, f64::max);
            if d < best.0 {
                best = (d, angle);
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationPeriod {
    pub lag: usize,
    /// Rotation taking step `N` to step `N + lag`, in `(−π, π]`.
    pub angle: f64,
}

/// Smallest `q ≤ 12` such that each of the last `q` steps is the step `q` earlier rotated
/// by one common angle.
pub fn estimate_rotation_period(steps: &[Polygon]) -> Option<RotationPeriod> {
    let len = steps.len();
    (1..=MAX_PERIOD).find_map(|q| {
        if len < 2 * q + 1 {
            return None;
        }
        let fits: Vec<(f64, f64)> = (len - q..len).map(|i| rotation_distance(&steps[i], &steps[i - q])).collect();
        let angle = fits[0].1;
        fits.iter()
            .all(|(d, a)| *d < PERIOD_TOL && reduce_angle(a - angle).abs() < 1e-6)
            .then_some(RotationPeriod { lag: q, angle })
    })
}

/// Relative size of the harmonic content outside `order` of an equiangular polygon.
pub fn hypocycloid_residual(poly: &Polygon, order: usize) -> Result<f64> {
    Ok(decompose_equiangular(poly)?.residual_outside(&[order], &[]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Homothety {
    pub center: Point,
    /// Negative for a homothety composed with a point reflection.
    pub ratio: f64,
    /// Largest vertex residual of the fit.
    pub residual: f64,
}

/// Least-squares homothety taking the vertices of `p` to those of `q`, if it fits.
pub fn homothety_check(p: &Polygon, q: &Polygon) -> Option<Homothety> {
    if p.len() != q.len() {
        return None;
    }
    let parallel = p.lines().iter().zip(q.lines()).all(|(a, b)| {
        let d = reduce_angle(2.0 * (a.alpha() - b.alpha())) / 2.0;
        d.abs() <= EPS_ANGLE
    });
    if !parallel {
        return None;
    }
    let (vp, vq) = (p.vertices(), q.vertices());
    let (cp, cq) = (centroid(&vp), centroid(&vq));
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b) in vp.iter().zip(&vq) {
        num += (b - cq).dot(&(a - cp));
        den += (a - cp).norm_squared();
    }
    if den == 0.0 {
        return None;
    }
    let ratio = num / den;
    let offset = cq - cp * ratio;
    let residual = vp
        .iter()
        .zip(&vq)
        .map(|(a, b)| (a * ratio + offset - b).norm())
        .fold(0.0, f64::max);
    let diameter = p.diameter().max(q.diameter());
    if residual >= EPS_HOM * diameter {
        return None;
    }
    let center = if (1.0 - ratio).abs() <= EPS_HOM {
        if offset.norm() > EPS_HOM * diameter {
            return None;
        }
        cp
    } else {
        offset / (1.0 - ratio)
    };
    Some(Homothety {
        center,
        ratio,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CoorientedLine, Coorientation};
    use crate::harmonics::equiangular_directions;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn pentagon() -> Polygon {
        Polygon::from_parts(&[0.3, 1.5, 2.6, 3.7, 5.1], &[1.0, 0.8, 1.3, 0.7, 1.1]).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let p = pentagon();
        let n = normalize(&p).unwrap();
        let v = n.vertices();
        assert!(centroid(&v).norm() < 1e-14);
        assert!((v.iter().map(|x| x.norm()).fold(0.0, f64::max) - 1.0).abs() < 1e-14);
        let again = normalize(&n).unwrap();
        assert!(sup_distance(&again, &n) < 1e-14);

        let moved = p.scaled(3.0).translated(&Point::new(5.0, 7.0));
        assert!(sup_distance(&normalize(&moved).unwrap(), &n) < 1e-13);

        let point = Polygon::from_parts(&[0.3, 1.5, 2.6], &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(normalize(&point), Err(Error::Collapsed));
    }

    #[test]
    fn homothety_examples() {
        let p = pentagon();
        let same = homothety_check(&p, &p).unwrap();
        assert!((same.ratio - 1.0).abs() < 1e-14);
        assert!((same.center - centroid(&p.vertices())).norm() < 1e-14);

        let h = homothety_check(&p, &p.scaled(2.0)).unwrap();
        assert!((h.ratio - 2.0).abs() < 1e-12 && h.center.norm() < 1e-12);

        let c = Point::new(0.5, -1.0);
        let flipped = p.translated(&-c).scaled(-0.5).translated(&c);
        let h = homothety_check(&p, &flipped).unwrap();
        assert!((h.ratio + 0.5).abs() < 1e-12 && (h.center - c).norm() < 1e-12);

        assert!(homothety_check(&p, &p.translated(&Point::new(1.0, 0.0))).is_none());
        assert!(homothety_check(&p, &pentagon().with_supports(&[1.0, 0.8, 1.3, 0.7, 2.0]).unwrap()).is_none());
    }

    #[test]
    fn quadrilateral_second_evolute_ratio_depends_on_angles() {
        let alpha = [0.2, 1.7, 3.1, 4.4];
        let ratio = |p: &[f64]| {
            let q = Polygon::from_parts(&alpha, p).unwrap();
            let q2 = p_evolute_transform(&p_evolute_transform(&q).unwrap()).unwrap();
            homothety_check(&q, &q2).unwrap().ratio
        };
        let a = ratio(&[1.0, 0.6, 1.4, 0.9]);
        let b = ratio(&[0.3, -0.5, 2.0, 1.1]);
        assert!((a - b).abs() < 1e-10, "{a} {b}");
    }

    #[test]
    fn equiangular_hexagon_alternates() {
        let p = [0.9, -0.4, 0.3, 0.8, -1.0, 0.2];
        let poly = Polygon::from_parts(&equiangular_directions(6), &p).unwrap();
        let trace = iterate(Transform::PEvolute, &poly, 40).unwrap();
        assert_eq!(trace.period_estimate, Some(2));
        assert_eq!(trace.classification, Classification::Degenerate);
        assert!(trace.terminal.is_none());
        assert_eq!(trace.steps.len(), 41);
        assert_eq!(trace.scale_log.len(), 40);
    }

    fn hexagon(head: [f64; 5]) -> (Vec<f64>, Polygon) {
        let theta = [head[0], head[1], head[2], head[3], head[4], TAU - head.iter().sum::<f64>()];
        let mut alpha = vec![0.0];
        for t in &theta[..5] {
            alpha.push(alpha.last().unwrap() + t);
        }
        let poly = Polygon::from_parts(&alpha, &[0.9, -0.4, 0.3, 0.8, -1.0, 0.2]).unwrap();
        (theta.to_vec(), poly)
    }

    #[test]
    fn real_pair_alternates_with_point_reflection() {
        // Two steps turn every side by π, so a real dominant pair ±λ yields P_{N+2} ≈ −P_N.
        let (theta, poly) = hexagon([
            0.48522244314133056,
            0.46604083209127034,
            2.51516157255118,
            0.27109039644189353,
            2.1073428844962447,
        ]);
        assert_eq!(spectral_report(&theta).unwrap().max_modulus_class, ModulusClass::RealPair);
        let trace = iterate(Transform::PEvolute, &poly, 400).unwrap();
        assert_eq!(trace.classification, Classification::RealPair);
        let s = &trace.steps;
        assert!(sup_distance(&s[398], &s[400].scaled(-1.0)) < 1e-9);
        assert!(sup_distance(&s[398], &s[400]) > 0.1);
        assert_eq!(trace.period_estimate, Some(4));
    }

    #[test]
    fn imaginary_pair_settles_into_period_two() {
        let (theta, poly) = hexagon([0.6, 1.4, 0.8, 1.2, 0.9]);
        assert_eq!(spectral_report(&theta).unwrap().max_modulus_class, ModulusClass::ImaginaryPair);
        let trace = iterate(Transform::PEvolute, &poly, 200).unwrap();
        assert_eq!(trace.classification, Classification::ImaginaryPair);
        let s = &trace.steps;
        assert!(sup_distance(&s[198], &s[200]) < 1e-9);
        assert_eq!(trace.period_estimate, Some(2));
        // The two limits are P-evolutes of each other up to normalization.
        let next = normalize(&p_evolute_transform(&s[199]).unwrap()).unwrap();
        assert!(sup_distance(&next, &s[200]) < 1e-12);
    }

    #[test]
    fn a_c_triangle_collapses() {
        let tri = Polygon::from_vertices(
            &[Point::new(0.0, 0.0), Point::new(3.0, 0.4), Point::new(1.0, 2.0)],
            Coorientation::Ccw,
        )
        .unwrap();
        let trace = iterate(Transform::AcEvolute, &tri, 5).unwrap();
        assert_eq!(trace.classification, Classification::Collapsed);
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn a_o_iterates_approach_top_order() {
        let n = 6;
        let p = [0.9, -0.4, 0.3, 0.8, -1.0, 0.2];
        let poly = Polygon::from_parts(&equiangular_directions(n), &p).unwrap();
        let trace = iterate(Transform::AoEvolute, &poly, 60).unwrap();
        let first = hypocycloid_residual(&trace.steps[1], 3).unwrap();
        let last = hypocycloid_residual(trace.steps.last().unwrap(), 3).unwrap();
        assert!(last < first * 1e-2, "{first} {last}");
    }

    fn rotated(p: &Polygon, angle: f64) -> Polygon {
        let lines = p.lines().iter().map(|l| CoorientedLine::new(l.alpha() + angle, l.p())).collect();
        Polygon::new(lines).unwrap()
    }

    #[test]
    fn rotation_distance_recovers_angle_and_relabeling() {
        let p = normalize(&pentagon()).unwrap();
        let q = rotated(&p, 0.7);
        let shifted = Polygon::new(q.lines().iter().cycle().skip(2).take(5).copied().collect()).unwrap();
        let (d, a) = rotation_distance(&shifted, &p);
        assert!(d < 1e-12);
        assert!((a - 0.7).abs() < 1e-12);
        let reversed = Polygon::from_vertices(&q.vertices().into_iter().rev().collect::<Vec<_>>(), Coorientation::Cw).unwrap();
        assert!(rotation_distance(&reversed, &p).0 < 1e-12);
        assert!(rotation_distance(&p, &p.scaled(1.5)).0 > 0.1);
    }

    #[test]
    fn rotation_period_of_synthetic_orbit() {
        let bases: Vec<Polygon> = [0.0, 0.3, 0.6, 0.9]
            .iter()
            .map(|t| {
                let q = Polygon::from_parts(&[0.3 + t, 1.5, 2.6, 3.7, 5.1], &[1.0, 0.8, 1.3 - t, 0.7, 1.1]).unwrap();
                normalize(&q).unwrap()
            })
            .collect();
        let turn = 3.0 * PI / 5.0;
        let steps: Vec<Polygon> = (0..40).map(|i| rotated(&bases[i % 4], turn * (i / 4) as f64)).collect();
        let r = estimate_rotation_period(&steps).unwrap();
        assert_eq!(r.lag, 4);
        assert!((r.angle - turn).abs() < 1e-9);
        assert_eq!(estimate_period(&steps), None);
    }

    #[test]
    fn transform_names_round_trip() {
        for t in [
            Transform::PEvolute,
            Transform::AoEvolute,
            Transform::AcEvolute,
            Transform::PEvolvent,
            Transform::AEvolvent(Parity::Even),
            Transform::AEvolvent(Parity::Odd),
        ] {
            assert_eq!(t.name().parse::<Transform>().unwrap(), t);
        }
        assert!("q_evolute".parse::<Transform>().is_err());
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent_and_shape_invariant(
            p in prop::collection::vec(-1.0..1.0_f64, 5),
            s in 0.1..10.0_f64,
            dx in -5.0..5.0_f64,
        ) {
            let poly = Polygon::from_parts(&[0.3, 1.5, 2.6, 3.7, 5.1], &p).unwrap();
            if let Ok(n) = normalize(&poly) {
                prop_assert!(sup_distance(&normalize(&n).unwrap(), &n) < 1e-12);
                let moved = poly.scaled(s).translated(&Point::new(dx, -dx));
                prop_assert!(sup_distance(&normalize(&moved).unwrap(), &n) < 1e-9);
            }
        }
    }
}
