//! Tolerance-controlled Hermitian eigendecomposition, numerical rank,
//! kernel bases and range isometries.
//!
//! Inputs are symmetrized as `(m + m*) / 2` before decomposition; a
//! symmetrization residual above `equality_abs` is an error. Eigenvalues are
//! returned in descending order with a stable tie order so downstream
//! tie-breaking is reproducible.

use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix, Tolerances};

/// Eigendecomposition of a Hermitian matrix: `m = V diag(eigenvalues) V*`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvector columns, ordered to match `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Spectral norm, i.e. the largest eigenvalue modulus.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Count of eigenvalues above the relative rank cutoff
    /// `rank_rel * max(lambda_max, 1)`.
    pub fn rank(&self, tol: &Tolerances) -> usize {
        let lmax = self.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        let threshold = tol.rank_rel * lmax.max(1.0);
        self.eigenvalues.iter().filter(|&&v| v > threshold).count()
    }

    /// Columns of eigenvectors selected by index range.
    fn column_range(&self, start: usize, len: usize) -> ComplexMatrix {
        ComplexMatrix::from_inner(self.eigenvectors.inner.columns(start, len).into_owned())
    }
}

/// Eigendecomposition of a (nominally) Hermitian matrix.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let residual = m.hermitian_residual();
    if residual > tol.equality_abs {
        return Err(Error::NonHermitian { residual });
    }
    let sym = m.symmetrized();
    let eig = sym.inner.symmetric_eigen();

    let dim = m.rows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(dim, dim, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigendecomposition gated on positive semidefiniteness.
pub fn psd_eigen(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    let eig = hermitian_eigen(m, tol)?;
    let min_eigenvalue = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eigenvalue < -tol.psd_abs {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(eig)
}

/// Numerical rank of a Hermitian PSD matrix.
pub fn numerical_rank(m: &ComplexMatrix, tol: &Tolerances) -> Result<usize> {
    Ok(psd_eigen(m, tol)?.rank(tol))
}

/// Orthonormal columns spanning the kernel of a Hermitian PSD matrix.
/// The basis is empty (zero columns) when the matrix has full rank.
pub fn kernel_basis(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = psd_eigen(m, tol)?;
    let rank = eig.rank(tol);
    Ok(eig.column_range(rank, m.rows() - rank))
}

/// Orthonormal columns spanning the range of a Hermitian PSD matrix.
pub fn range_isometry(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = psd_eigen(m, tol)?;
    let rank = eig.rank(tol);
    Ok(eig.column_range(0, rank))
}

/// Inverse square root of a Hermitian positive definite matrix.
pub(crate) fn inv_sqrt_pd(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = psd_eigen(m, tol)?;
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min <= 0.0 {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let dim = m.rows();
    let v = &eig.eigenvectors;
    let d = ComplexMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(1.0 / eig.eigenvalues[i].sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(v.matmul(&d).matmul(&v.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn reconstruct(eig: &HermitianEigen) -> ComplexMatrix {
        let dim = eig.eigenvalues.len();
        let d = ComplexMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::new(eig.eigenvalues[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        eig.eigenvectors.matmul(&d).matmul(&eig.eigenvectors.adjoint())
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = hermitian_eigen(&ComplexMatrix::identity(3), &tol()).unwrap();
        for v in &eig.eigenvalues {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_sorted_descending() {
        let m = ComplexMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, -1.0]).unwrap();
        let eig = hermitian_eigen(&m, &tol()).unwrap();
        assert!((eig.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn p_matrix_kernel_vector() {
        // smallest eigenvalue of the 3x3 correlation-like fixture is 0 with
        // eigenvector proportional to [1, -2/sqrt(6), -1/sqrt(6)]
        let p = crate::constructions::p_matrix();
        let eig = hermitian_eigen(&p, &tol()).unwrap();
        assert!(eig.eigenvalues[2].abs() < 1e-12);
        let q = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0 / 6f64.sqrt(), 0.0),
            Complex64::new(-1.0 / 6f64.sqrt(), 0.0),
        ];
        let qn = (q[0].norm_sqr() + q[1].norm_sqr() + q[2].norm_sqr()).sqrt();
        let v: Vec<Complex64> = eig.eigenvectors.column(2);
        // compare up to phase via |<v, q>| = |v||q|
        let ip: Complex64 = v.iter().zip(q.iter()).map(|(a, b)| a.conj() * b).sum();
        assert!((ip.norm() - qn).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eigen(&m, &tol()),
            Err(Error::NonHermitian { .. })
        ));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            hermitian_eigen(&r, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let mut rng = 1u64;
        let mut next = move || {
            // xorshift, good enough for a fixed test matrix
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            (rng as f64 / u64::MAX as f64) - 0.5
        };
        let g = ComplexMatrix::from_fn(6, 6, |_, _| Complex64::new(next(), next()));
        let m = g.matmul(&g.adjoint());
        let eig = hermitian_eigen(&m, &tol()).unwrap();
        let scale = eig.spectral_norm();
        assert!((&reconstruct(&eig) - &m).max_abs() <= 1e-8 * scale);
        assert!(eig.eigenvectors.isometry_residual() < 1e-10);
    }

    #[test]
    fn numerical_rank_cases() {
        let t = tol();
        // full rank scaled identity
        let n = 3;
        let m = ComplexMatrix::identity(n * n).scale_re(1.0 / n as f64);
        assert_eq!(numerical_rank(&m, &t).unwrap(), n * n);
        // rank-1 outer product
        let x = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-1.0, 0.4),
            Complex64::new(0.0, 2.0),
        ];
        assert_eq!(numerical_rank(&ComplexMatrix::outer(&x), &t).unwrap(), 1);
        // indefinite input is rejected
        let ind = ComplexMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(
            numerical_rank(&ind, &t),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn kernel_basis_identity_is_empty() {
        let b = kernel_basis(&ComplexMatrix::identity(4), &tol()).unwrap();
        assert_eq!(b.cols(), 0);
        assert_eq!(b.rows(), 4);
    }

    #[test]
    fn kernel_and_range_of_p() {
        let t = tol();
        let p = crate::constructions::p_matrix();
        let k = kernel_basis(&p, &t).unwrap();
        assert_eq!(k.cols(), 1);
        let col = k.column(0);
        let pk = p.apply(&col);
        let norm: f64 = pk.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm <= 10.0 * t.rank_rel * 3.0);

        let v = range_isometry(&p, &t).unwrap();
        assert_eq!(v.cols(), 2);
        assert!(v.isometry_residual() < 1e-10);
        // P - V V* P vanishes
        let proj = v.matmul(&v.adjoint()).matmul(&p);
        assert!((&p - &proj).max_abs() <= 10.0 * t.rank_rel * 3.0);
    }

    #[test]
    fn range_isometry_matches_gram_schmidt_on_a3() {
        // independent oracle: orthonormalize the two nonzero columns of the
        // fixture directly and compare range projectors
        let t = tol();
        let c = crate::constructions::a3();
        let v = range_isometry(c.matrix(), &t).unwrap();
        assert_eq!(v.cols(), 2);

        let col0 = c.matrix().column(0);
        let col4 = c.matrix().column(4);
        let n0: f64 = col0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let q0: Vec<Complex64> = col0.iter().map(|z| z / n0).collect();
        let ip: Complex64 = q0.iter().zip(col4.iter()).map(|(a, b)| a.conj() * b).sum();
        let mut q1: Vec<Complex64> = col4
            .iter()
            .zip(q0.iter())
            .map(|(b, a)| b - a * ip)
            .collect();
        let n1: f64 = q1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut q1 {
            *z /= n1;
        }
        let gs = &ComplexMatrix::outer(&q0) + &ComplexMatrix::outer(&q1);
        let proj = v.matmul(&v.adjoint());
        assert!((&gs - &proj).max_abs() < 1e-10);
    }

    #[test]
    fn range_isometry_of_identity_is_unitary() {
        let v = range_isometry(&ComplexMatrix::identity(4), &tol()).unwrap();
        assert_eq!(v.cols(), 4);
        let proj = v.matmul(&v.adjoint());
        assert!((&proj - &ComplexMatrix::identity(4)).max_abs() < 1e-12);
    }

    #[test]
    fn range_isometry_rank1() {
        let t = tol();
        let x = [
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ];
        let m = ComplexMatrix::outer(&x);
        let v = range_isometry(&m, &t).unwrap();
        assert_eq!((v.rows(), v.cols()), (2, 1));
        // single column is x up to phase
        let col = v.column(0);
        let ip: Complex64 = col.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
        assert!((ip.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inv_sqrt_squares_back() {
        let m = ComplexMatrix::from_real(2, 2, &[4.0, 1.0, 1.0, 3.0]).unwrap();
        let s = inv_sqrt_pd(&m, &tol()).unwrap();
        let prod = s.matmul(&m).matmul(&s);
        assert!((&prod - &ComplexMatrix::identity(2)).max_abs() < 1e-12);
    }
}
