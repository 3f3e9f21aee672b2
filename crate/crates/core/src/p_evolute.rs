//! The perpendicular-bisector evolute and the spectral theory of its matrix.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{alternating_sums, Point, Polygon, EPS_PARALLEL};
use crate::linalg;

/// Rank threshold relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-8;
/// Turning angles with `|sin θ|` below this make the report flag ill-conditioning.
pub const ILL_CONDITIONED_SIN: f64 = 1e-6;

fn check_theta(theta: &[f64]) -> Result<()> {
    if theta.len() < 3 {
        return Err(Error::TooFewSides(theta.len()));
    }
    for (j, t) in theta.iter().enumerate() {
        if t.is_nan() || t.abs() >= PI || t.sin().abs() <= EPS_PARALLEL {
            return Err(Error::DegenerateTurning(j));
        }
    }
    Ok(())
}

/// Directions with `α_0 = 0` realizing the given turning angles.
pub fn directions_from_turning(theta: &[f64]) -> Vec<f64> {
    let mut alpha = Vec::with_capacity(theta.len());
    let mut a = 0.0;
    for t in theta {
        alpha.push(a);
        a += t;
    }
    alpha
}

/// The cyclically tridiagonal matrix taking support numbers to those of the evolute.
#[derive(Debug, Clone, PartialEq)]
pub struct PMatrix {
    theta: Vec<f64>,
    entries: DMatrix<f64>,
}

impl PMatrix {
    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// `cot` of the turning angle preceding line `j`.
    pub fn a(&self, j: usize) -> f64 {
        let n = self.n();
        1.0 / self.theta[(j + n - 1) % n].tan()
    }

    /// `csc` of the turning angle preceding line `j`.
    pub fn b(&self, j: usize) -> f64 {
        let n = self.n();
        1.0 / self.theta[(j + n - 1) % n].sin()
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        (&self.entries * DVector::from_column_slice(p))
            .iter()
            .copied()
            .collect()
    }

    pub fn power(&self, k: u32) -> DMatrix<f64> {
        let n = self.n();
        (0..k).fold(DMatrix::identity(n, n), |acc, _| acc * &self.entries)
    }
}

pub fn p_matrix(theta: &[f64]) -> Result<PMatrix> {
    check_theta(theta)?;
    let n = theta.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let prev = theta[(i + n - 1) % n];
        let next = theta[i];
        m[(i, i)] += 0.5 * (1.0 / prev.tan() - 1.0 / next.tan());
        m[(i, (i + 1) % n)] += 0.5 / next.sin();
        m[(i, (i + n - 1) % n)] -= 0.5 / prev.sin();
    }
    Ok(PMatrix {
        theta: theta.to_vec(),
        entries: m,
    })
}

/// Symmetric matrix taking support numbers to signed side lengths.
pub fn m_matrix(theta: &[f64]) -> Result<DMatrix<f64>> {
    check_theta(theta)?;
    let n = theta.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let prev = theta[(i + n - 1) % n];
        let next = theta[i];
        m[(i, (i + n - 1) % n)] += 1.0 / prev.sin();
        m[(i, i)] -= 1.0 / prev.tan() + 1.0 / next.tan();
        m[(i, (i + 1) % n)] += 1.0 / next.sin();
    }
    Ok(m)
}

/// Perpendicular bisectors of the sides, cooriented a quarter turn ahead.
pub fn p_evolute_transform(poly: &Polygon) -> Result<Polygon> {
    let (theta, _) = poly.turning_angles();
    let pm = p_matrix(&theta)?;
    let alpha: Vec<f64> = poly.alphas().iter().map(|a| a + FRAC_PI_2).collect();
    Polygon::from_parts(&alpha, &pm.apply(&poly.supports()))
}

/// Structure of the eigenvalues of largest modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusClass {
    /// A simple pair `±μ` of real eigenvalues.
    RealPair,
    /// A simple pair `±iμ`.
    ImaginaryPair,
    /// A quadruple `±μ, ±μ̄` off both axes.
    ComplexQuadruple,
    /// Anything else, such as repeated top eigenvalues.
    Degenerate,
}

impl ModulusClass {
    pub fn name(&self) -> &'static str {
        match self {
            ModulusClass::RealPair => "real-pair",
            ModulusClass::ImaginaryPair => "imaginary-pair",
            ModulusClass::ComplexQuadruple => "complex-quadruple",
            ModulusClass::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub eigenvalues: Vec<Complex<f64>>,
    /// `max(|P C + S|, |P S − C|)` in the sup norm.
    pub invariant_pair_residual: f64,
    /// Greedy matching distance between the spectrum and its negation.
    pub symmetry_residual: f64,
    /// Distance from `i` to the nearest eigenvalue.
    pub imaginary_unit_residual: f64,
    pub spectral_radius: f64,
    pub max_modulus_class: ModulusClass,
    /// Dimension of the generalized eigenspace of `±i`.
    pub plus_minus_i_dimension: usize,
    pub ill_conditioned: bool,
}

/// Relative tolerance for grouping eigenvalues of equal modulus.
const MODULUS_TOL: f64 = 1e-6;

fn classify_top(eigs: &[Complex<f64>], radius: f64) -> ModulusClass {
    let tol = MODULUS_TOL * radius.max(1.0);
    let top: Vec<&Complex<f64>> = eigs
        .iter()
        .filter(|z| (z.norm() - radius).abs() <= tol)
        .collect();
    let real = top.iter().all(|z| z.im.abs() <= tol);
    let imag = top.iter().all(|z| z.re.abs() <= tol);
    match (top.len(), real, imag) {
        (2, true, _) => ModulusClass::RealPair,
        (2, _, true) => ModulusClass::ImaginaryPair,
        (4, false, false) => ModulusClass::ComplexQuadruple,
        _ => ModulusClass::Degenerate,
    }
}

/// Dimension of the generalized kernel of `P² + I`: nullity of its powers until it stabilizes.
pub fn plus_minus_i_dimension(pm: &PMatrix) -> Result<usize> {
    let n = pm.n();
    let k = &pm.entries * &pm.entries + DMatrix::identity(n, n);
    let mut power = k.clone();
    let mut last = linalg::nullity(&power, RANK_TOL)?;
    for _ in 1..n {
        power = &power * &k;
        let next = linalg::nullity(&power, RANK_TOL)?;
        if next == last {
            break;
        }
        last = next;
    }
    Ok(last)
}

pub fn spectral_report(theta: &[f64]) -> Result<SpectralReport> {
    let pm = p_matrix(theta)?;
    let eigenvalues = linalg::eigenvalues(&pm.entries)?;
    let spectral_radius = eigenvalues.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let negated: Vec<Complex<f64>> = eigenvalues.iter().map(|z| -z).collect();
    let symmetry_residual = linalg::matching_distance(&eigenvalues, &negated);
    let i = Complex::new(0.0, 1.0);
    let imaginary_unit_residual = eigenvalues
        .iter()
        .map(|z| (z - i).norm())
        .fold(f64::INFINITY, f64::min);

    let alpha = directions_from_turning(theta);
    let c: Vec<f64> = alpha.iter().map(|a| a.cos()).collect();
    let s: Vec<f64> = alpha.iter().map(|a| a.sin()).collect();
    let pc = pm.apply(&c);
    let ps = pm.apply(&s);
    let invariant_pair_residual = (0..pm.n())
        .map(|j| (pc[j] + s[j]).abs().max((ps[j] - c[j]).abs()))
        .fold(0.0, f64::max);

    Ok(SpectralReport {
        max_modulus_class: classify_top(&eigenvalues, spectral_radius),
        plus_minus_i_dimension: plus_minus_i_dimension(&pm)?,
        ill_conditioned: theta.iter().any(|t| t.sin().abs() < ILL_CONDITIONED_SIN),
        eigenvalues,
        invariant_pair_residual,
        symmetry_residual,
        imaginary_unit_residual,
        spectral_radius,
    })
}

/// `(cos B_0, …, cos B_{n-1})`, spanning the kernel of the evolute matrix for odd `n`.
pub fn kernel_generator(alpha: &[f64]) -> Result<Vec<f64>> {
    if alpha.len().is_multiple_of(2) {
        return Err(Error::EvenGon(alpha.len()));
    }
    Ok(alternating_sums(alpha)
        .partial
        .iter()
        .map(|b| b.cos())
        .collect())
}

/// Linear point map onto `span{C, S}` along the evolute-invariant complement.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSteiner {
    x: DVector<f64>,
    y: DVector<f64>,
    alpha: Vec<f64>,
}

impl PseudoSteiner {
    pub fn point(&self, p: &[f64]) -> Point {
        let p = DVector::from_column_slice(p);
        Point::new(self.x.dot(&p), self.y.dot(&p))
    }

    /// Spectral projector `p ↦ x(p)·C + y(p)·S`.
    pub fn projector(&self) -> DMatrix<f64> {
        let c = DVector::from_iterator(self.alpha.len(), self.alpha.iter().map(|a| a.cos()));
        let s = DVector::from_iterator(self.alpha.len(), self.alpha.iter().map(|a| a.sin()));
        c * self.x.transpose() + s * self.y.transpose()
    }
}

pub fn pseudo_steiner(theta: &[f64], alpha: &[f64]) -> Result<PseudoSteiner> {
    let pm = p_matrix(theta)?;
    let n = pm.n();
    if alpha.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: alpha.len(),
        });
    }
    let dim = plus_minus_i_dimension(&pm)?;
    if dim != 2 {
        return Err(Error::NoInvariantComplement(dim));
    }
    let k = &pm.entries * &pm.entries + DMatrix::identity(n, n);
    let basis = linalg::left_null_vectors(&k, 2)?;
    let c = DVector::from_iterator(n, alpha.iter().map(|a| a.cos()));
    let s = DVector::from_iterator(n, alpha.iter().map(|a| a.sin()));
    // Pick the combination y of the left kernel with y·C = 0 and y·S = 1.
    let g = nalgebra::Matrix2::new(
        basis[0].dot(&c),
        basis[1].dot(&c),
        basis[0].dot(&s),
        basis[1].dot(&s),
    );
    let w = g
        .try_inverse()
        .ok_or(Error::NoInvariantComplement(dim))?
        * nalgebra::Vector2::new(0.0, 1.0);
    let y = &basis[0] * w[0] + &basis[1] * w[1];
    let x = -(pm.entries.transpose() * &y);
    Ok(PseudoSteiner {
        x,
        y,
        alpha: alpha.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{reduce_angle, CoorientedLine};
    use std::f64::consts::TAU;

    fn equiangular(n: usize) -> Vec<f64> {
        vec![TAU / n as f64; n]
    }

    fn sample_theta(n: usize, seed: u64) -> Vec<f64> {
        // Deterministic spread of positive turning angles summing to 2π.
        let w: Vec<f64> = (0..n)
            .map(|j| 1.0 + 0.3 * ((seed as f64 + 1.3) * (j as f64 + 0.7)).sin())
            .collect();
        let total: f64 = w.iter().sum();
        w.iter().map(|x| x / total * TAU).collect()
    }

    fn polygon(theta: &[f64], p: &[f64], a0: f64) -> Polygon {
        let alpha: Vec<f64> = directions_from_turning(theta).iter().map(|a| a + a0).collect();
        Polygon::from_parts(&alpha, p).unwrap()
    }

    #[test]
    fn equiangular_matrix_is_scaled_shift_difference() {
        for n in 3..10 {
            let pm = p_matrix(&equiangular(n)).unwrap();
            let mut z = DMatrix::zeros(n, n);
            for i in 0..n {
                z[(i, (i + 1) % n)] = 1.0;
            }
            let expected = (&z - z.transpose()) / (2.0 * (TAU / n as f64).sin());
            assert!((pm.entries() - expected).amax() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn trace_and_entry_identities() {
        for seed in 0..20 {
            let pm = p_matrix(&sample_theta(6, seed)).unwrap();
            assert!(pm.entries().trace().abs() < 1e-12);
            for j in 0..6 {
                assert!((pm.b(j).powi(2) - pm.a(j).powi(2) - 1.0).abs() < 1e-10);
            }
            // Cyclically tridiagonal.
            for i in 0..6usize {
                for k in 0..6usize {
                    let d = (i as isize - k as isize).rem_euclid(6);
                    if d > 1 && d < 5 {
                        assert_eq!(pm.entries()[(i, k)], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_turning_is_rejected() {
        assert_eq!(p_matrix(&[1.0, 0.0, 2.0]), Err(Error::DegenerateTurning(1)));
        assert_eq!(p_matrix(&[1.0, PI, 2.0]), Err(Error::DegenerateTurning(1)));
        assert!(m_matrix(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn triangle_kernel() {
        for seed in 0..10 {
            let theta = sample_theta(3, seed);
            let alpha = directions_from_turning(&theta);
            let k = kernel_generator(&alpha).unwrap();
            let out = p_matrix(&theta).unwrap().apply(&k);
            assert!(out.iter().all(|x| x.abs() < 1e-10));
        }
    }

    #[test]
    fn kernel_generator_examples() {
        let alpha = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
        for x in kernel_generator(&alpha).unwrap() {
            assert!((x + 0.5).abs() < 1e-12);
        }
        assert_eq!(kernel_generator(&[0.0, 1.0, 2.0, 3.0]), Err(Error::EvenGon(4)));

        let theta = sample_theta(7, 3);
        let alpha: Vec<f64> = directions_from_turning(&theta).iter().map(|a| a + 0.4).collect();
        let k = kernel_generator(&alpha).unwrap();
        assert!(p_matrix(&theta).unwrap().apply(&k).iter().all(|x| x.abs() < 1e-10));
        let r: Vec<f64> = Polygon::from_parts(&alpha, &k)
            .unwrap()
            .vertices()
            .iter()
            .map(|v| v.norm())
            .collect();
        assert!(r.iter().all(|x| (x - r[0]).abs() < 1e-10));
    }

    #[test]
    fn lengths_and_antisymmetry() {
        for seed in 0..30 {
            let n = 3 + (seed as usize % 7);
            let theta = sample_theta(n, seed);
            let p: Vec<f64> = (0..n).map(|j| ((j * 7 + seed as usize) as f64).sin()).collect();
            let poly = polygon(&theta, &p, 0.3);
            let m = m_matrix(&theta).unwrap();
            assert!((&m - m.transpose()).amax() == 0.0);
            let l = &m * DVector::from_column_slice(&p);
            for (a, b) in l.iter().zip(poly.side_lengths()) {
                assert!((a - b).abs() < 1e-10);
            }
            let mp = &m * p_matrix(&theta).unwrap().entries();
            assert!((&mp + mp.transpose()).amax() < 1e-10);
            let evo = p_evolute_transform(&poly).unwrap();
            let dot: f64 = p.iter().zip(evo.side_lengths()).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-10);
        }
    }

    #[test]
    fn evolute_lines_are_perpendicular_bisectors() {
        for seed in 0..20 {
            let n = 3 + (seed as usize % 6);
            let theta = sample_theta(n, seed);
            let p: Vec<f64> = (0..n).map(|j| ((j * 3 + seed as usize) as f64).cos()).collect();
            let poly = polygon(&theta, &p, 1.1);
            let evo = p_evolute_transform(&poly).unwrap();
            let v = poly.vertices();
            for i in 0..n {
                let mid = (v[i] + v[(i + n - 1) % n]) * 0.5;
                assert!(evo.line(i).signed_distance(&mid).abs() < 1e-10);
                assert!(evo.line(i).normal().dot(&poly.line(i).normal()).abs() < 1e-12);
                assert!(reduce_angle(evo.line(i).alpha() - poly.line(i).alpha() - FRAC_PI_2).abs() < 1e-12);
            }
        }
    }

    fn circumcenter(a: Point, b: Point, c: Point) -> Point {
        let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
        let (a2, b2, c2) = (a.norm_squared(), b.norm_squared(), c.norm_squared());
        Point::new(
            (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
            (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d,
        )
    }

    #[test]
    fn triangle_evolute_is_circumcenter() {
        for seed in 0..10 {
            let theta = sample_theta(3, seed);
            let poly = polygon(&theta, &[0.3, -0.8, 1.2], 0.2);
            let v = poly.vertices();
            let o = circumcenter(v[0], v[1], v[2]);
            let evo = p_evolute_transform(&poly).unwrap();
            for l in evo.lines() {
                assert!(l.signed_distance(&o).abs() < 1e-10);
            }
            let ps = pseudo_steiner(&theta, &poly.alphas()).unwrap();
            assert!((ps.point(&poly.supports()) - o).norm() < 1e-9);
        }
    }

    #[test]
    fn pentagon_golden_contraction() {
        let n = 5;
        let alpha: Vec<f64> = (1..=n).map(|j| TAU * j as f64 / n as f64).collect();
        let p: Vec<f64> = (1..=n).map(|j| (2.0 * TAU * j as f64 / n as f64).cos()).collect();
        let out = p_matrix(&equiangular(n)).unwrap().apply(&p);
        let ratio = out.iter().map(|x| x * x).sum::<f64>().sqrt() / p.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((ratio - 2.0 * (TAU / 5.0).cos()).abs() < 1e-12);
        assert!((ratio - 0.6180339887498949).abs() < 1e-12);
        let _ = alpha;
    }

    #[test]
    fn hexagon_spectrum_pattern() {
        let r = spectral_report(&equiangular(6)).unwrap();
        let expected: Vec<Complex<f64>> = (0..6)
            .map(|m| Complex::new(0.0, (TAU * m as f64 / 6.0).sin() / (TAU / 6.0).sin()))
            .collect();
        assert!(linalg::matching_distance(&r.eigenvalues, &expected) < 1e-9);
        assert_eq!(r.plus_minus_i_dimension, 4);
        assert_eq!(r.max_modulus_class, ModulusClass::Degenerate);
        assert!(!r.ill_conditioned);
    }

    #[test]
    fn random_spectra_are_symmetric() {
        for seed in 0..20 {
            let r = spectral_report(&sample_theta(7, seed)).unwrap();
            assert!(r.symmetry_residual < 1e-8 * r.spectral_radius);
            assert!(r.imaginary_unit_residual < 1e-8);
            assert!(r.invariant_pair_residual < 1e-10);
            assert!(r.eigenvalues.iter().any(|z| z.norm() < 1e-8), "odd n is singular");
        }
    }

    #[test]
    fn flags_nearly_degenerate_turning() {
        let theta = [2e-7, 2.0, 1.5];
        assert!(spectral_report(&theta).unwrap().ill_conditioned);
    }

    #[test]
    fn pseudo_steiner_of_equiangular_is_vertex_centroid() {
        for n in [3usize, 4, 5, 7, 9] {
            let theta = equiangular(n);
            let alpha: Vec<f64> = directions_from_turning(&theta).iter().map(|a| a + 0.25).collect();
            let p: Vec<f64> = (0..n).map(|j| ((j * j) as f64 * 0.37).sin()).collect();
            let poly = Polygon::from_parts(&alpha, &p).unwrap();
            let centroid = poly.vertices().iter().sum::<Point>() / n as f64;
            let ps = pseudo_steiner(&theta, &alpha).unwrap();
            assert!((ps.point(&p) - centroid).norm() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn equiangular_hexagon_has_no_complement() {
        let theta = equiangular(6);
        let alpha = directions_from_turning(&theta);
        assert_eq!(pseudo_steiner(&theta, &alpha), Err(Error::NoInvariantComplement(4)));
    }

    #[test]
    fn pseudo_steiner_is_evolute_invariant_and_equivariant() {
        for seed in 0..100 {
            let n = [5usize, 7, 9][seed % 3];
            let theta: Vec<f64> = (0..n)
                .map(|j| TAU / n as f64 + 0.05 * ((seed * 31 + j * 17) as f64).sin())
                .collect();
            let total: f64 = theta.iter().sum();
            let theta: Vec<f64> = theta.iter().map(|t| t * TAU / total).collect();
            let p: Vec<f64> = (0..n).map(|j| ((seed + 3 * j) as f64).cos()).collect();
            let poly = polygon(&theta, &p, 0.1 * seed as f64);
            let ps = pseudo_steiner(&theta, &poly.alphas()).unwrap();
            let before = ps.point(&p);

            let evo = p_evolute_transform(&poly).unwrap();
            let ps_evo = pseudo_steiner(&theta, &evo.alphas()).unwrap();
            assert!((ps_evo.point(&evo.supports()) - before).norm() < 1e-8);

            let v = Point::new(1.5, -0.25);
            let moved = poly.translated(&v);
            assert!((ps.point(&moved.supports()) - before - v).norm() < 1e-9);

            let proj = ps.projector();
            assert!((&proj * &proj - &proj).amax() < 1e-8);
        }
    }

    #[test]
    fn evolute_of_a_point_polygon() {
        // Three lines through one point map to three lines through the same point.
        let q = Point::new(0.4, -1.0);
        let poly = Polygon::new(vec![
            CoorientedLine::through(&q, 0.1),
            CoorientedLine::through(&q, 2.0),
            CoorientedLine::through(&q, 4.0),
        ])
        .unwrap();
        let evo = p_evolute_transform(&poly).unwrap();
        assert!(evo.lines().iter().all(|l| l.signed_distance(&q).abs() < 1e-12));
    }
}
