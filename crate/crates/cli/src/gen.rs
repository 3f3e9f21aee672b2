//! Seeded generators for random polygons and support functions.
//!
//! Every trial draws from its own ChaCha8 stream: the generator is seeded with the
//! experiment seed and `set_stream(trial)` selects the trial, so trials can run in any
//! order and still see the same numbers.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use evolab_core::geometry::{Coorientation, Point, Polygon};
use evolab_core::harmonics::{equiangular_directions, harmonic_support, HarmonicKind};
use evolab_core::smooth::SupportPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

/// Turning angles closer than this to `0` or `π` are redrawn.
pub const MIN_TURN: f64 = 0.05;
const MAX_TRIES: usize = 10_000;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenSpec {
    /// Turning angles uniform on the simplex `Σθ = 2π`, supports uniform in `[-1, 1]`.
    RandomNgon(usize),
    /// `RandomNgon` projected onto the zero-quasiperimeter hyperplane (odd `n`).
    RandomZeroQp(usize),
    /// Directions `2πj/n`, random supports.
    Equiangular(usize),
    /// Equiangular with zero-mean supports.
    EquiangularZeroMean(usize),
    /// `a·C_m + b·S_m` with `(a, b)` uniform in the unit square.
    Harmonic(usize, usize),
    /// Vertices in the unit disk, all angles acute, counterclockwise.
    AcuteTriangle,
    /// Hexagon whose opposite sides are parallel.
    ParallelHexagon,
    /// Pentagon whose third evolute is a point.
    DegeneratePentagon,
    /// Zero-mean trigonometric polynomial of the given degree, `q = 1`.
    RandomSupport(u32),
}

impl GenSpec {
    pub fn is_smooth(&self) -> bool {
        matches!(self, GenSpec::RandomSupport(_))
    }

    pub fn polygon(&self, rng: &mut ChaCha8Rng) -> anyhow::Result<Polygon> {
        match *self {
            GenSpec::RandomNgon(n) => random_ngon(rng, n),
            GenSpec::RandomZeroQp(n) => random_zero_qp(rng, n),
            GenSpec::Equiangular(n) => {
                let p = uniform_supports(rng, n);
                Ok(Polygon::from_parts(&equiangular_directions(n), &p)?)
            }
            GenSpec::EquiangularZeroMean(n) => {
                let mut p = uniform_supports(rng, n);
                let mean = p.iter().sum::<f64>() / n as f64;
                p.iter_mut().for_each(|x| *x -= mean);
                Ok(Polygon::from_parts(&equiangular_directions(n), &p)?)
            }
            GenSpec::Harmonic(n, m) => {
                let (a, b): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let c = harmonic_support(n, m, HarmonicKind::Cos);
                let s = harmonic_support(n, m, HarmonicKind::Sin);
                let p: Vec<f64> = c.iter().zip(&s).map(|(c, s)| a * c + b * s).collect();
                Ok(Polygon::from_parts(&equiangular_directions(n), &p)?)
            }
            GenSpec::AcuteTriangle => acute_triangle(rng),
            GenSpec::ParallelHexagon => parallel_hexagon(rng),
            GenSpec::DegeneratePentagon => degenerate_pentagon(rng),
            GenSpec::RandomSupport(_) => bail!("`{self}` generates a support function, not a polygon"),
        }
    }

    pub fn support(&self, rng: &mut ChaCha8Rng) -> anyhow::Result<SupportPoly> {
        let GenSpec::RandomSupport(d) = *self else {
            bail!("`{self}` generates a polygon, not a support function");
        };
        Ok(random_support(rng, d))
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::RandomNgon(n) => write!(f, "random-ngon:{n}"),
            GenSpec::RandomZeroQp(n) => write!(f, "random-zero-qp:{n}"),
            GenSpec::Equiangular(n) => write!(f, "equiangular:{n}"),
            GenSpec::EquiangularZeroMean(n) => write!(f, "equiangular-zero-mean:{n}"),
            GenSpec::Harmonic(n, m) => write!(f, "harmonic:{n}:{m}"),
            GenSpec::AcuteTriangle => f.write_str("acute-triangle"),
            GenSpec::ParallelHexagon => f.write_str("parallel-hexagon"),
            GenSpec::DegeneratePentagon => f.write_str("degenerate-pentagon"),
            GenSpec::RandomSupport(d) => write!(f, "random-support:{d}"),
        }
    }
}

impl FromStr for GenSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let args: Vec<usize> = parts
            .map(|x| x.parse().with_context(|| format!("bad generator argument `{x}` in `{s}`")))
            .collect::<anyhow::Result<_>>()?;
        let arity = |k: usize| -> anyhow::Result<()> {
            if args.len() != k {
                bail!("generator `{name}` takes {k} argument(s), got {}", args.len());
            }
            Ok(())
        };
        let sides = |n: usize| -> anyhow::Result<usize> {
            if n < 3 {
                bail!("a polygon needs at least 3 sides, got {n}");
            }
            Ok(n)
        };
        let spec = match name {
            "random-ngon" => {
                arity(1)?;
                GenSpec::RandomNgon(sides(args[0])?)
            }
            "random-zero-qp" => {
                arity(1)?;
                if args[0].is_multiple_of(2) {
                    bail!("random-zero-qp needs an odd number of sides");
                }
                GenSpec::RandomZeroQp(sides(args[0])?)
            }
            "equiangular" => {
                arity(1)?;
                GenSpec::Equiangular(sides(args[0])?)
            }
            "equiangular-zero-mean" => {
                arity(1)?;
                GenSpec::EquiangularZeroMean(sides(args[0])?)
            }
            "harmonic" => {
                arity(2)?;
                let (n, m) = (sides(args[0])?, args[1]);
                if m == 0 || 2 * m >= n {
                    bail!("harmonic order must satisfy 0 < m < n/2");
                }
                GenSpec::Harmonic(n, m)
            }
            "acute-triangle" => {
                arity(0)?;
                GenSpec::AcuteTriangle
            }
            "parallel-hexagon" => {
                arity(0)?;
                GenSpec::ParallelHexagon
            }
            "degenerate-pentagon" => {
                arity(0)?;
                GenSpec::DegeneratePentagon
            }
            "random-support" => {
                arity(1)?;
                if args[0] < 2 {
                    bail!("random-support needs degree at least 2");
                }
                GenSpec::RandomSupport(u32::try_from(args[0])?)
            }
            _ => bail!("unknown generator `{s}`"),
        };
        Ok(spec)
    }
}

fn uniform_supports(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

fn turn_ok(t: f64) -> bool {
    t > MIN_TURN && (t - PI).abs() > MIN_TURN && t < TAU - MIN_TURN
}

/// Uniform point of the simplex `Σθ = total`, redrawn while any angle is near `0` or `π`.
fn simplex_angles(rng: &mut ChaCha8Rng, n: usize, total: f64) -> anyhow::Result<Vec<f64>> {
    for _ in 0..MAX_TRIES {
        let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let sum: f64 = e.iter().sum();
        let theta: Vec<f64> = e.iter().map(|x| total * x / sum).collect();
        if theta.iter().all(|&t| turn_ok(t)) {
            return Ok(theta);
        }
    }
    Err(anyhow!("could not draw {n} admissible turning angles"))
}

fn cumulative(alpha0: f64, theta: &[f64]) -> Vec<f64> {
    let mut alpha = Vec::with_capacity(theta.len());
    let mut a = alpha0;
    for t in theta {
        alpha.push(a);
        a += t;
    }
    alpha
}

fn random_ngon(rng: &mut ChaCha8Rng, n: usize) -> anyhow::Result<Polygon> {
    let theta = simplex_angles(rng, n, TAU)?;
    let alpha = cumulative(rng.random_range(0.0..TAU), &theta);
    let p = uniform_supports(rng, n);
    Ok(Polygon::from_parts(&alpha, &p)?)
}

fn random_zero_qp(rng: &mut ChaCha8Rng, n: usize) -> anyhow::Result<Polygon> {
    let poly = random_ngon(rng, n)?;
    // The quasiperimeter is Σ p_j sin B_j, so project along (sin B_j).
    let w: Vec<f64> = poly.alternating_sums().partial.iter().map(|b| b.sin()).collect();
    let p = poly.supports();
    let t = p.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>() / w.iter().map(|y| y * y).sum::<f64>();
    let q: Vec<f64> = p.iter().zip(&w).map(|(x, y)| x - t * y).collect();
    Ok(poly.with_supports(&q)?)
}

fn acute_triangle(rng: &mut ChaCha8Rng) -> anyhow::Result<Polygon> {
    for _ in 0..MAX_TRIES {
        let v: Vec<Point> = (0..3)
            .map(|_| {
                let r = rng.random_range(0.0_f64..1.0).sqrt();
                let a = rng.random_range(0.0..TAU);
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        let area = (v[1] - v[0]).perp(&(v[2] - v[0]));
        if area.abs() < 0.05 {
            continue;
        }
        // Every angle at least 5 degrees below a right angle.
        let acute = (0..3).all(|i| {
            let (a, b, c) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
            let (u, w) = (b - a, c - a);
            u.dot(&w) > 0.087 * u.norm() * w.norm()
        });
        if !acute {
            continue;
        }
        let v = if area > 0.0 { v } else { vec![v[0], v[2], v[1]] };
        return Ok(Polygon::from_vertices(&v, Coorientation::Ccw)?);
    }
    Err(anyhow!("could not draw an acute triangle"))
}

fn parallel_hexagon(rng: &mut ChaCha8Rng) -> anyhow::Result<Polygon> {
    let half = simplex_angles(rng, 3, PI)?;
    let theta: Vec<f64> = half.iter().chain(&half).copied().collect();
    let alpha = cumulative(rng.random_range(0.0..TAU), &theta);
    let p = uniform_supports(rng, 6);
    Ok(Polygon::from_parts(&alpha, &p)?)
}

/// Draws `β` with `Σ sin β_j = 0` and `Σ β_j = 2π`, then turns `θ_j = (β_j + β_{j+1})/2`.
///
/// `β_0..β_2` are free; `β_3 = a` and `β_4 = c − a` with `c = 2π − β_0 − β_1 − β_2` solve
/// `sin a + sin(c − a) = 2 sin(c/2) cos(a − c/2) = −(sin β_0 + sin β_1 + sin β_2)`.
pub fn degenerate_pentagon_betas(rng: &mut ChaCha8Rng) -> anyhow::Result<[f64; 5]> {
    for _ in 0..MAX_TRIES {
        let b: [f64; 3] = [
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
        ];
        let c = TAU - b.iter().sum::<f64>();
        let rhs = -b.iter().map(|x| x.sin()).sum::<f64>();
        let denom = 2.0 * (c / 2.0).sin();
        if denom.abs() < 1e-3 || (rhs / denom).abs() > 1.0 {
            continue;
        }
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let a = c / 2.0 + sign * (rhs / denom).acos();
        let beta = [b[0], b[1], b[2], a, c - a];
        let theta = degenerate_pentagon_turns(&beta);
        if theta.iter().all(|t| turn_ok(t.rem_euclid(TAU))) {
            return Ok(beta);
        }
    }
    Err(anyhow!("could not draw a degenerate pentagon"))
}

pub fn degenerate_pentagon_turns(beta: &[f64; 5]) -> [f64; 5] {
    std::array::from_fn(|j| (beta[j] + beta[(j + 1) % 5]) / 2.0)
}

fn degenerate_pentagon(rng: &mut ChaCha8Rng) -> anyhow::Result<Polygon> {
    let beta = degenerate_pentagon_betas(rng)?;
    let theta = degenerate_pentagon_turns(&beta);
    let alpha = cumulative(rng.random_range(0.0..TAU), &theta);
    let p = uniform_supports(rng, 5);
    Ok(Polygon::from_parts(&alpha, &p)?)
}

fn random_support(rng: &mut ChaCha8Rng, degree: u32) -> SupportPoly {
    let mut s = SupportPoly::new(1);
    for k in 1..=degree {
        let (a, b) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        s.set(k, a, b);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in [
            "random-ngon:6",
            "random-zero-qp:7",
            "equiangular:8",
            "equiangular-zero-mean:5",
            "harmonic:9:2",
            "acute-triangle",
            "parallel-hexagon",
            "degenerate-pentagon",
            "random-support:4",
        ] {
            assert_eq!(s.parse::<GenSpec>().unwrap().to_string(), s);
        }
        for bad in ["random-ngon", "random-ngon:2", "random-zero-qp:6", "harmonic:6:3", "nope:3", "random-ngon:x"] {
            assert!(bad.parse::<GenSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let spec = GenSpec::RandomNgon(6);
        let a = spec.polygon(&mut trial_rng(7, 3)).unwrap();
        let b = spec.polygon(&mut trial_rng(7, 3)).unwrap();
        let c = spec.polygon(&mut trial_rng(7, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_ngon_turns_sum_to_full_turn() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let poly = random_ngon(&mut rng, 5).unwrap();
            let (_, k) = poly.turning_angles();
            // Angles above π reduce to negative turns, dropping the total by a full turn each.
            assert!(k <= 1);
            assert!(poly.supports().iter().all(|p| p.abs() <= 1.0));
        }
    }

    #[test]
    fn zero_qp_projection() {
        let mut rng = trial_rng(2, 0);
        for _ in 0..50 {
            let poly = random_zero_qp(&mut rng, 7).unwrap();
            assert!(poly.quasiperimeter().unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn acute_triangles_are_acute_and_ccw() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..50 {
            let v = acute_triangle(&mut rng).unwrap().vertices();
            assert!((v[1] - v[0]).perp(&(v[2] - v[0])) > 0.0);
            for i in 0..3 {
                let (a, b, c) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
                assert!((b - a).dot(&(c - a)) > 0.0);
            }
        }
    }

    #[test]
    fn parallel_hexagon_opposite_sides() {
        let poly = parallel_hexagon(&mut trial_rng(4, 0)).unwrap();
        let a = poly.alphas();
        for j in 0..3 {
            assert!((a[j + 3] - a[j]).sin().abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_pentagon_betas_satisfy_recipe() {
        let mut rng = trial_rng(5, 0);
        for _ in 0..50 {
            let beta = degenerate_pentagon_betas(&mut rng).unwrap();
            assert!(beta.iter().map(|b| b.sin()).sum::<f64>().abs() < 1e-12);
            assert!((beta.iter().sum::<f64>() - TAU).abs() < 1e-12);
            let theta = degenerate_pentagon_turns(&beta);
            assert!((theta.iter().sum::<f64>() - TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn equiangular_zero_mean() {
        let poly = GenSpec::EquiangularZeroMean(7).polygon(&mut trial_rng(6, 0)).unwrap();
        assert!(poly.supports().iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn random_support_is_zero_mean() {
        let s = GenSpec::RandomSupport(5).support(&mut trial_rng(8, 0)).unwrap();
        assert_eq!(s.mean(), 0.0);
        assert_eq!(s.terms().count(), 5);
    }
}
