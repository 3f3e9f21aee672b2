//! Deterministic SVG rendering of polygon sequences.

use std::fmt::Write;

use evolab_core::error::Error;
use evolab_core::geometry::{Point, Polygon};

const PALETTE: [&str; 6] = ["#1f4e79", "#c0392b", "#2e7d32", "#8e44ad", "#d35400", "#555555"];
const DASHES: [&str; 3] = ["none", "6 3", "2 2"];

#[derive(Debug, Clone, Default)]
pub struct SvgStyle {
    pub markers: bool,
    pub arrows: bool,
    /// Written verbatim into a leading XML comment.
    pub header: Option<String>,
}

fn coord(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

// SVG's y axis points down.
fn flip(u: &Point) -> Point {
    Point::new(u.x, -u.y)
}

pub fn render_svg(polygons: &[Polygon], style: &SvgStyle) -> Result<String, Error> {
    if polygons.is_empty() {
        return Err(Error::EmptyInput);
    }
    let verts: Vec<Vec<Point>> = polygons
        .iter()
        .map(|p| p.vertices().iter().map(flip).collect())
        .collect();
    let (mut lo, mut hi) = (Point::repeat(f64::INFINITY), Point::repeat(f64::NEG_INFINITY));
    for u in verts.iter().flatten() {
        lo = lo.inf(u);
        hi = hi.sup(u);
    }
    let extent = (hi - lo).max();
    let size = if extent > 0.0 && extent.is_finite() { extent } else { 1.0 };
    let margin = 0.05 * size;
    let (x0, y0) = (lo.x - margin, lo.y - margin);
    let (w, h) = (hi.x - lo.x + 2.0 * margin, hi.y - lo.y + 2.0 * margin);
    let stroke = size / 400.0;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if let Some(header) = &style.header {
        let _ = writeln!(out, "<!-- {} -->", header.replace("--", "- -"));
    }
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        coord(x0),
        coord(y0),
        coord(w),
        coord(h)
    );
    for (i, (poly, v)) in polygons.iter().zip(&verts).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = DASHES[i % DASHES.len()];
        let mut d = String::new();
        for (j, u) in v.iter().enumerate() {
            let _ = write!(d, "{}{} {} ", if j == 0 { "M" } else { "L" }, coord(u.x), coord(u.y));
        }
        d.push('Z');
        let _ = writeln!(
            out,
            "  <path id=\"polygon-{i}\" d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\" stroke-dasharray=\"{dash}\"/>",
            coord(stroke)
        );
        if style.markers {
            for u in v {
                let _ = writeln!(
                    out,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{color}\"/>",
                    coord(u.x),
                    coord(u.y),
                    coord(2.0 * stroke)
                );
            }
        }
        if style.arrows {
            let n = v.len();
            for (j, l) in poly.lines().iter().enumerate() {
                let mid = (v[(j + n - 1) % n] + v[j]) / 2.0;
                let tip = mid + flip(&l.normal()) * (0.04 * size);
                let _ = writeln!(
                    out,
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"{}\"/>",
                    coord(mid.x),
                    coord(mid.y),
                    coord(tip.x),
                    coord(tip.y),
                    coord(stroke)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use evolab_core::geometry::Coorientation;

    fn triangle() -> Polygon {
        let v = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.0, 1.0)];
        Polygon::from_vertices(&v, Coorientation::Ccw).unwrap()
    }

    #[test]
    fn single_triangle() {
        let svg = render_svg(&[triangle()], &SvgStyle::default()).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        let path = svg.lines().find(|l| l.contains("<path")).unwrap();
        assert_eq!(path.matches('L').count(), 2);
        assert_eq!(path.matches('M').count(), 1);
        assert!(path.contains('Z'));
        // 2 × 1 box, margin 0.1.
        assert!(svg.contains("viewBox=\"-0.100000 -1.100000 2.200000 1.200000\""));
    }

    #[test]
    fn markers_and_arrows() {
        let style = SvgStyle {
            markers: true,
            arrows: true,
            header: Some("seed=1".into()),
        };
        let svg = render_svg(&[triangle()], &style).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<line").count(), 3);
        assert!(svg.contains("<!-- seed=1 -->"));
    }

    #[test]
    fn deterministic() {
        let style = SvgStyle::default();
        let a = render_svg(&[triangle(), triangle().scaled(2.0)], &style).unwrap();
        let b = render_svg(&[triangle(), triangle().scaled(2.0)], &style).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_input() {
        assert_eq!(render_svg(&[], &SvgStyle::default()), Err(Error::EmptyInput));
    }
}
