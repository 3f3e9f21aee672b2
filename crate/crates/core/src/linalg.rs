//! Dense eigenvalue and rank helpers on top of nalgebra.

use nalgebra::linalg::balancing::balance_parlett_reinsch;
use nalgebra::{DMatrix, DVector, Schur, SVD};

pub use nalgebra::Complex;

use crate::error::{Error, Result};

/// Eigenvalues of a real square matrix: Parlett–Reinsch balancing, then a real Schur form.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let mut a = m.clone();
    balance_parlett_reinsch(&mut a);
    let schur = Schur::try_new(a, f64::EPSILON, 10_000).ok_or(Error::EigensolverFailure)?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

fn svd(m: &DMatrix<f64>, vectors: bool) -> Result<SVD<f64, nalgebra::Dyn, nalgebra::Dyn>> {
    SVD::try_new(m.clone(), vectors, vectors, f64::EPSILON, 10_000).ok_or(Error::EigensolverFailure)
}

/// Number of singular values at most `rel_tol · σ_max`.
pub fn nullity(m: &DMatrix<f64>, rel_tol: f64) -> Result<usize> {
    let s = svd(m, false)?.singular_values;
    let max = s.iter().fold(0.0_f64, |a, &b| a.max(b));
    if max == 0.0 {
        return Ok(m.ncols());
    }
    Ok(s.iter().filter(|&&x| x <= rel_tol * max).count())
}

/// `k` orthonormal vectors `y` minimizing `|yᵀ m|`.
pub fn left_null_vectors(m: &DMatrix<f64>, k: usize) -> Result<Vec<DVector<f64>>> {
    let svd = svd(&m.transpose(), true)?;
    let v_t = svd.v_t.ok_or(Error::EigensolverFailure)?;
    let rows = v_t.nrows();
    Ok((rows - k..rows)
        .map(|r| v_t.row(r).transpose().into_owned())
        .collect())
}

/// Multiset distance between two spectra by greedy nearest matching.
pub fn matching_distance(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    let mut pool: Vec<Complex<f64>> = b.to_vec();
    let mut worst = 0.0_f64;
    for x in a {
        let Some((idx, d)) = pool
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|u, v| u.1.total_cmp(&v.1))
        else {
            return f64::INFINITY;
        };
        worst = worst.max(d);
        pool.swap_remove(idx);
    }
    if pool.is_empty() {
        worst
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_block_eigenvalues() {
        let m = DMatrix::from_row_slice(3, 3, &[0.0, -2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 5.0]);
        let ev = eigenvalues(&m).unwrap();
        let expected = [Complex::new(0.0, 2.0), Complex::new(0.0, -2.0), Complex::new(5.0, 0.0)];
        assert!(matching_distance(&ev, &expected) < 1e-12);
    }

    #[test]
    fn badly_scaled_matrix_is_balanced() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1e10, 1e-10, 2.0]);
        let ev = eigenvalues(&m).unwrap();
        // Characteristic polynomial λ² − 3λ + 1.
        let r = 5f64.sqrt();
        let expected = [Complex::new((3.0 + r) / 2.0, 0.0), Complex::new((3.0 - r) / 2.0, 0.0)];
        assert!(matching_distance(&ev, &expected) < 1e-9);
    }

    #[test]
    fn nullity_and_left_kernel() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert_eq!(nullity(&m, 1e-10).unwrap(), 1);
        let y = &left_null_vectors(&m, 1).unwrap()[0];
        assert!((y.transpose() * &m).norm() < 1e-12);
        assert_eq!(nullity(&DMatrix::zeros(2, 2), 1e-10).unwrap(), 2);
    }

    #[test]
    fn matching_is_a_multiset_check() {
        let a = [Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)];
        let b = [Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)];
        assert!((matching_distance(&a, &b) - 2.0).abs() < 1e-15);
        assert_eq!(matching_distance(&a, &b[..1]), f64::INFINITY);
    }
}
