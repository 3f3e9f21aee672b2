//! Angle-bisector evolutes.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::{reduce_angle, vertex, CoorientedLine, Coorientation, Point, Polygon, EPS_ISO};

/// A polygon whose sides may be individually reoriented against their coorientation.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedPolygon {
    base: Polygon,
    flags: Vec<i8>,
    /// Number of half-index shifts accumulated by repeated evolutes.
    half_shifts: u32,
}

impl OrientedPolygon {
    pub fn new(base: Polygon, flags: Vec<i8>) -> Result<Self> {
        if flags.len() != base.len() {
            return Err(Error::LengthMismatch {
                expected: base.len(),
                got: flags.len(),
            });
        }
        if flags.iter().any(|f| *f != 1 && *f != -1) {
            return Err(Error::Invalid("orientation flags must be +1 or -1".into()));
        }
        Ok(Self {
            base,
            flags,
            half_shifts: 0,
        })
    }

    pub fn from_polygon(base: Polygon) -> Self {
        let n = base.len();
        Self {
            base,
            flags: vec![1; n],
            half_shifts: 0,
        }
    }

    pub fn base(&self) -> &Polygon {
        &self.base
    }

    pub fn flags(&self) -> &[i8] {
        &self.flags
    }

    pub fn half_shifts(&self) -> u32 {
        self.half_shifts
    }

    /// Lines with the flagged ones reversed.
    pub fn effective(&self) -> Polygon {
        let lines = self
            .base
            .lines()
            .iter()
            .zip(&self.flags)
            .map(|(l, f)| if *f < 0 { l.reversed() } else { *l })
            .collect();
        Polygon::new(lines).expect("reversal keeps neighbours non-parallel")
    }

    pub fn flipped(&self) -> Self {
        Self {
            flags: self.flags.iter().map(|f| -f).collect(),
            ..self.clone()
        }
    }
}

/// Interior or exterior bisector of a pair of oriented lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bisector {
    /// Along the difference of the orienting vectors.
    Interior,
    /// Along their sum.
    Exterior,
}

/// Bisector through the common point of `a` and `b`.
pub fn bisector(a: &CoorientedLine, b: &CoorientedLine, kind: Bisector) -> Result<CoorientedLine> {
    let v = vertex(a, b)?;
    let half = reduce_angle(b.alpha() - a.alpha()) / 2.0;
    let alpha = match kind {
        Bisector::Interior => a.alpha() + half + FRAC_PI_2,
        Bisector::Exterior => a.alpha() + half,
    };
    Ok(CoorientedLine::through(&v, alpha))
}

/// Interior bisectors at the vertices, line `j` passing through vertex `j`.
pub fn a_o_lines(poly: &Polygon) -> Result<Polygon> {
    let n = poly.len();
    let (theta, _) = poly.turning_angles();
    let lines: Vec<CoorientedLine> = (0..n)
        .map(|j| {
            let (a, b) = (poly.line(j), poly.line(j + 1));
            let half = theta[j] / 2.0;
            CoorientedLine::new(a.alpha() + half + FRAC_PI_2, (b.p() - a.p()) / (2.0 * half.sin()))
        })
        .collect();
    Polygon::new(lines).map_err(|e| match e {
        Error::ParallelLines(i, k) => Error::EvoluteParallelSides(i, k),
        other => other,
    })
}

pub fn a_o_evolute(poly: &OrientedPolygon) -> Result<OrientedPolygon> {
    let out = a_o_lines(&poly.effective())?;
    let n = out.len();
    Ok(OrientedPolygon {
        base: out,
        flags: vec![1; n],
        half_shifts: poly.half_shifts + 1,
    })
}

/// Turning angles of the A_o-evolute: `θ*_j = (θ_j + θ_{j+1}) / 2`.
pub fn angle_map(theta: &[f64]) -> Vec<f64> {
    let n = theta.len();
    (0..n)
        .map(|j| (theta[j] + theta[(j + 1) % n]) / 2.0)
        .collect()
}

/// The polygon on `vertices` with sides oriented along the traversal.
pub fn cyclic_orientation(vertices: &[Point]) -> Result<Polygon> {
    Polygon::from_vertices(vertices, Coorientation::Ccw)
}

/// A_o lines of the cyclically oriented polygon on the vertices of `poly`, before reorienting.
pub fn a_c_lines(poly: &Polygon) -> Result<Polygon> {
    a_o_lines(&cyclic_orientation(&poly.vertices())?)
}

/// A-evolute driven by the cyclic orientation, with the cyclic orientation re-imposed.
pub fn a_c_evolute(poly: &Polygon) -> Result<Polygon> {
    let lines = a_c_lines(poly)?;
    let v = lines.vertices();
    let c = v.iter().sum::<Point>() / v.len() as f64;
    let scale = 1.0 + v.iter().fold(0.0_f64, |m, p| m.max(p.norm()));
    if v.iter().all(|p| (p - c).norm() <= EPS_ISO * scale) {
        return Err(Error::Collapsed);
    }
    cyclic_orientation(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::{equiangular_directions, harmonic_support, vertex_centroid, HarmonicKind};
    use std::f64::consts::{PI, TAU};

    fn hedgehog(theta: &[f64], p: &[f64]) -> Polygon {
        let mut alpha = Vec::new();
        let mut a = 0.4;
        for t in theta {
            alpha.push(a);
            a += t;
        }
        Polygon::from_parts(&alpha, p).unwrap()
    }

    #[test]
    fn lines_pass_through_vertices_and_bisect() {
        let poly = hedgehog(&[1.0, 1.5, 0.8, 1.2, TAU - 4.5], &[0.3, -0.2, 1.0, 0.5, 0.1]);
        let evo = a_o_lines(&poly).unwrap();
        for j in 0..5 {
            let v = poly.vertex(j);
            let l = evo.line(j);
            assert!(l.signed_distance(&v).abs() < 1e-12);
            // Equal angles with both sides: reflecting one side in the bisector gives the other.
            let r = crate::geometry::reflect_line(l, poly.line(j));
            assert!(r.same_point_set(poly.line(j + 1), 1e-10));
            assert!(l.approx_eq(&bisector(poly.line(j), poly.line(j + 1), Bisector::Interior).unwrap(), 1e-10));
        }
    }

    #[test]
    fn circumscribed_equiangular_collapses() {
        let n = 7;
        let poly = Polygon::from_parts(&equiangular_directions(n), &vec![1.3; n]).unwrap();
        let evo = a_o_lines(&poly).unwrap();
        assert!(evo.supports().iter().all(|p| p.abs() < 1e-12));
    }

    #[test]
    fn constant_shift_does_not_change_evolute() {
        let theta = [1.0, 1.5, 0.8, 1.2, TAU - 4.5];
        let p = [0.3, -0.2, 1.0, 0.5, 0.1];
        let shifted: Vec<f64> = p.iter().map(|x| x + 2.5).collect();
        let a = a_o_lines(&hedgehog(&theta, &p)).unwrap();
        let b = a_o_lines(&hedgehog(&theta, &shifted)).unwrap();
        for (x, y) in a.lines().iter().zip(b.lines()) {
            assert!(x.approx_eq(y, 1e-12));
        }
    }

    #[test]
    fn flipping_all_orientations_reverses_output() {
        let base = hedgehog(&[1.0, 1.5, 0.8, 1.2, TAU - 4.5], &[0.3, -0.2, 1.0, 0.5, 0.1]);
        let oriented = OrientedPolygon::new(base, vec![1, -1, 1, 1, -1]).unwrap();
        let a = a_o_evolute(&oriented).unwrap();
        let b = a_o_evolute(&oriented.flipped()).unwrap();
        for (x, y) in a.base().lines().iter().zip(b.base().lines()) {
            assert!(x.approx_eq(&y.reversed(), 1e-12));
        }
        assert_eq!(a.half_shifts(), 1);
        assert!(OrientedPolygon::new(a.base().clone(), vec![1, 0, 1, 1, 1]).is_err());
    }

    #[test]
    fn parallel_output_is_reported() {
        // l_0 and l_2 share a direction, so the bisectors at vertices 0 and 1 are parallel.
        let poly = Polygon::from_parts(&[0.0, FRAC_PI_2, 0.0, 4.0], &[1.0, 1.0, 2.0, 0.5]).unwrap();
        assert!(matches!(a_o_lines(&poly), Err(Error::EvoluteParallelSides(0, 1))));
    }

    #[test]
    fn hypocycloid_scaling() {
        for n in 5..=12usize {
            for m in 1..n.div_ceil(2) {
                let (a, b) = (0.6, -0.8);
                let c = harmonic_support(n, m, HarmonicKind::Cos);
                let s = harmonic_support(n, m, HarmonicKind::Sin);
                let p: Vec<f64> = (0..n).map(|j| a * c[j] + b * s[j]).collect();
                let poly = Polygon::from_parts(&equiangular_directions(n), &p).unwrap();
                let evo = a_o_lines(&poly).unwrap();
                let k = (PI * m as f64 / n as f64).sin() / (PI / n as f64).sin();
                for j in 1..=n {
                    // Hand-derived: line j+½ is k·(π/2 + π/n + 2πj/n, −(a sin + b·(−cos)) of m(π/n + 2πj/n)).
                    let phase = m as f64 * (PI / n as f64 + TAU * j as f64 / n as f64);
                    let expected = -k * (a * phase.sin() - b * phase.cos());
                    let line = evo.line(j - 1);
                    assert!((line.p() - expected).abs() < 1e-10, "n={n} m={m}");
                    let alpha = FRAC_PI_2 + PI / n as f64 + TAU * j as f64 / n as f64;
                    assert!(reduce_angle(line.alpha() - alpha).abs() < 1e-12);
                }

                let second = a_o_lines(&evo).unwrap();
                for j in 0..n {
                    let original = poly.line(j + 1).scaled(k * k).reversed();
                    assert!(second.line(j).approx_eq(&original, 1e-10));
                }
            }
        }
    }

    #[test]
    fn equiangular_centroid_preserved() {
        let n = 8;
        let p = [0.3, -1.0, 0.4, 0.9, 0.2, -0.5, 0.7, 0.1];
        let poly = Polygon::from_parts(&equiangular_directions(n), &p).unwrap();
        let evo = a_o_lines(&poly).unwrap();
        assert!((vertex_centroid(&poly) - vertex_centroid(&evo)).norm() < 1e-12);
    }

    #[test]
    fn angle_map_properties() {
        let theta = [1.0, 1.5, 0.8, 1.2, TAU - 4.5];
        let poly = hedgehog(&theta, &[0.0; 5]);
        let (actual, _) = a_o_lines(&poly).unwrap().turning_angles();
        let mapped = angle_map(&theta);
        for (x, y) in actual.iter().zip(&mapped) {
            assert!(reduce_angle(x - y).abs() < 1e-12);
        }
        assert!((mapped.iter().sum::<f64>() - TAU).abs() < 1e-12);
        assert_eq!(angle_map(&[0.5; 4]), vec![0.5; 4]);

        let mut t = theta.to_vec();
        for _ in 0..300 {
            t = angle_map(&t);
        }
        assert!(t.iter().all(|x| (x - TAU / 5.0).abs() < 1e-9));

        // Fourier modes are eigenvectors with eigenvalue (1 + ω^m) / 2.
        let n = 6;
        for m in 0..n {
            let w = TAU * m as f64 / n as f64;
            let re: Vec<f64> = (0..n).map(|j| (w * j as f64).cos()).collect();
            let im: Vec<f64> = (0..n).map(|j| (w * j as f64).sin()).collect();
            let (mr, mi) = (angle_map(&re), angle_map(&im));
            let (lr, li) = ((1.0 + w.cos()) / 2.0, w.sin() / 2.0);
            for j in 0..n {
                assert!((mr[j] - (lr * re[j] - li * im[j])).abs() < 1e-12);
                assert!((mi[j] - (lr * im[j] + li * re[j])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triangle_a_c_evolute_is_a_point() {
        let tri = Polygon::from_vertices(
            &[Point::new(0.0, 0.0), Point::new(4.0, 0.5), Point::new(1.0, 3.0)],
            Coorientation::Ccw,
        )
        .unwrap();
        let lines = a_c_lines(&tri).unwrap();
        let v = lines.vertices();
        assert!((v[0] - v[1]).norm() < 1e-12 && (v[1] - v[2]).norm() < 1e-12);
        assert_eq!(a_c_evolute(&tri), Err(Error::Collapsed));
    }

    #[test]
    fn a_c_reorients_result() {
        let quad = Polygon::from_vertices(
            &[Point::new(0.0, 0.0), Point::new(3.0, 0.2), Point::new(2.5, 2.0), Point::new(-0.3, 1.4)],
            Coorientation::Ccw,
        )
        .unwrap();
        let evo = a_c_evolute(&quad).unwrap();
        let v = evo.vertices();
        for j in 0..evo.len() {
            let d = v[j] - v[(j + evo.len() - 1) % evo.len()];
            assert!((d.normalize() - evo.line(j).direction()).norm() < 1e-9);
        }
    }
}
