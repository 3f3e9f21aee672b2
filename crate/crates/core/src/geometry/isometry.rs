use std::f64::consts::PI;

use nalgebra::Matrix2;

use super::{alternating_sums, reduce_angle, unit, CoorientedLine, Point, EPS_ISO};
use crate::error::{Error, Result};

/// `u ↦ linear·u + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine2 {
    pub linear: Matrix2<f64>,
    pub offset: Point,
}

impl Affine2 {
    pub fn identity() -> Self {
        Self {
            linear: Matrix2::identity(),
            offset: Point::zeros(),
        }
    }

    pub fn reflection(mirror: &CoorientedLine) -> Self {
        let e = mirror.normal();
        Self {
            linear: Matrix2::identity() - e * e.transpose() * 2.0,
            offset: e * (2.0 * mirror.p()),
        }
    }

    pub fn apply(&self, u: &Point) -> Point {
        self.linear * u + self.offset
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Self) -> Self {
        Self {
            linear: self.linear * first.linear,
            offset: self.linear * first.offset + self.offset,
        }
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.linear.determinant() > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Isometry {
    Identity,
    /// Counterclockwise rotation by `angle ∈ (−π, π]` about `center`.
    Rotation { center: Point, angle: f64 },
    Translation { vector: Point },
    Reflection { axis: CoorientedLine },
    /// Reflection in `axis` followed by translation by `shift` along the axis direction.
    Glide { axis: CoorientedLine, shift: f64 },
}

impl Isometry {
    /// Classifies an affine isometry. For orientation-reversing maps the axis normal is
    /// chosen closest to `axis_hint` when given.
    pub fn classify(map: &Affine2, axis_hint: Option<f64>) -> Self {
        let m = &map.linear;
        let t = map.offset;
        if map.is_orientation_preserving() {
            let angle = m[(1, 0)].atan2(m[(0, 0)]);
            if angle.abs() <= EPS_ISO {
                if t.norm() <= EPS_ISO {
                    Isometry::Identity
                } else {
                    Isometry::Translation { vector: t }
                }
            } else {
                let center = (Matrix2::identity() - m)
                    .try_inverse()
                    .map(|inv| inv * t)
                    .unwrap_or_else(Point::zeros);
                Isometry::Rotation { center, angle }
            }
        } else {
            // m = [[cos 2φ, sin 2φ], [sin 2φ, −cos 2φ]] fixes the direction at angle φ.
            let phi = m[(1, 0)].atan2(m[(0, 0)]) / 2.0;
            let mut beta = phi + PI / 2.0;
            if let Some(h) = axis_hint {
                if reduce_angle(beta - h).abs() > PI / 2.0 {
                    beta += PI;
                }
            }
            let e = unit(beta);
            let axis = CoorientedLine::new(beta, t.dot(&e) / 2.0);
            let shift = t.dot(&axis.direction());
            if shift.abs() <= EPS_ISO {
                Isometry::Reflection { axis }
            } else {
                Isometry::Glide { axis, shift }
            }
        }
    }

    pub fn affine(&self) -> Affine2 {
        match *self {
            Isometry::Identity => Affine2::identity(),
            Isometry::Rotation { center, angle } => {
                let r = Matrix2::new(angle.cos(), -angle.sin(), angle.sin(), angle.cos());
                Affine2 {
                    linear: r,
                    offset: center - r * center,
                }
            }
            Isometry::Translation { vector } => Affine2 {
                linear: Matrix2::identity(),
                offset: vector,
            },
            Isometry::Reflection { axis } => Affine2::reflection(&axis),
            Isometry::Glide { axis, shift } => {
                let mut a = Affine2::reflection(&axis);
                a.offset += axis.direction() * shift;
                a
            }
        }
    }

    pub fn apply(&self, u: &Point) -> Point {
        self.affine().apply(u)
    }

    /// Image of an oriented line, orientation carried along.
    pub fn apply_line(&self, l: &CoorientedLine) -> CoorientedLine {
        let a = self.affine();
        let d = a.linear * l.direction();
        let alpha = d.y.atan2(d.x) - PI / 2.0;
        CoorientedLine::through(&a.apply(&l.foot()), alpha)
    }

    pub fn is_orientation_preserving(&self) -> bool {
        matches!(
            self,
            Isometry::Identity | Isometry::Rotation { .. } | Isometry::Translation { .. }
        )
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Isometry::Identity => "identity",
            Isometry::Rotation { .. } => "rotation",
            Isometry::Translation { .. } => "translation",
            Isometry::Reflection { .. } => "reflection",
            Isometry::Glide { .. } => "glide",
        }
    }
}

/// Composite affine map `S_{n-1} ∘ … ∘ S_0` of reflections in the given lines.
pub fn reflection_product(lines: &[CoorientedLine]) -> Affine2 {
    lines
        .iter()
        .fold(Affine2::identity(), |acc, l| Affine2::reflection(l).after(&acc))
}

/// Composes reflections in `lines`, first line first, and classifies the result.
///
/// For an odd count the axis normal is the alternating direction sum `B`.
pub fn compose_reflections(lines: &[CoorientedLine]) -> Result<Isometry> {
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    let map = reflection_product(lines);
    let hint = (lines.len() % 2 == 1).then(|| {
        let alpha: Vec<f64> = lines.iter().map(CoorientedLine::alpha).collect();
        alternating_sums(&alpha).total
    });
    Ok(Isometry::classify(&map, hint))
}
