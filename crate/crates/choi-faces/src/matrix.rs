//! Dense complex matrices and the tolerance set shared by every numerical test.
//!
//! [`ComplexMatrix`] is a thin validated wrapper around a dense
//! column-major `nalgebra` matrix; constructors taking raw data reject
//! non-finite entries, everything else is ordinary linear algebra.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;

/// Numerical cutoffs used throughout the crate.
///
/// `rank_rel` is the relative eigenvalue/singular-value cutoff for rank
/// decisions, `psd_abs` the allowance on the most negative eigenvalue of a
/// nominally PSD matrix, and `equality_abs` the entrywise comparison
/// tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rank_rel: f64,
    pub psd_abs: f64,
    pub equality_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel: 1e-9,
            psd_abs: 1e-9,
            equality_abs: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(rank_rel: f64, psd_abs: f64, equality_abs: f64) -> Result<Self> {
        if !(rank_rel > 0.0 && psd_abs > 0.0 && equality_abs > 0.0) {
            return Err(Error::InvalidTolerance);
        }
        Ok(Self {
            rank_rel,
            psd_abs,
            equality_abs,
        })
    }
}

/// Dense complex matrix, the universal carrier of the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub(crate) inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting NaN/infinite values.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, &entries),
        })
    }

    /// Builds a real matrix from row-major `f64` entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            inner: DMatrix::from_fn(rows, cols, f),
        }
    }

    pub(crate) fn from_inner(inner: DMatrix<Complex64>) -> Self {
        Self { inner }
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.inner[(i, j)] = v;
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        let (r, c) = (self.rows(), self.cols());
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            inner: self.inner.map(|z| z.conj()),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.diagonal().sum()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            inner: self.inner.map(|z| z * a),
        }
    }

    pub fn scale_re(&self, a: f64) -> Self {
        self.scale(Complex64::new(a, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols(),
            other.rows(),
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows(),
            self.cols(),
            other.rows(),
            other.cols()
        );
        Self {
            inner: &self.inner * &other.inner,
        }
    }

    /// Kronecker product, row index `(i, k)` mapping to `i * other.rows() + k`.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.kronecker(&other.inner),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-norm of `m - m*`; zero exactly on Hermitian matrices.
    pub fn hermitian_residual(&self) -> f64 {
        (self - &self.adjoint()).max_abs()
    }

    /// `(m + m*) / 2`.
    pub fn symmetrized(&self) -> Self {
        (self + &self.adjoint()).scale_re(0.5)
    }

    /// The `size`×`size` block at block position `(bi, bj)`.
    pub fn block(&self, bi: usize, bj: usize, size: usize) -> Self {
        Self {
            inner: self.inner.view((bi * size, bj * size), (size, size)).into_owned(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.inner.column(j).iter().cloned().collect()
    }

    /// Outer product `x x*`.
    pub fn outer(x: &[Complex64]) -> Self {
        let n = x.len();
        Self::from_fn(n, n, |i, j| x[i] * x[j].conj())
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols(), x.len(), "apply dimension mismatch");
        let v = nalgebra::DVector::from_column_slice(x);
        (&self.inner * v).iter().cloned().collect()
    }

    /// Max-norm residual of `u* u - I`; zero exactly on unitaries/isometries.
    pub fn isometry_residual(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        (&gram - &Self::identity(self.cols())).max_abs()
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_validates_length_and_finiteness() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![Complex64::new(1.0, 0.0); 3]),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0)]),
            Err(Error::NonFinite)
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![Complex64::new(0.0, f64::INFINITY)]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn tolerances_must_be_positive() {
        assert!(Tolerances::new(1e-9, 1e-9, 1e-8).is_ok());
        assert!(Tolerances::new(0.0, 1e-9, 1e-8).is_err());
        assert!(Tolerances::new(1e-9, -1.0, 1e-8).is_err());
    }

    #[test]
    fn row_major_round_trip() {
        let entries: Vec<Complex64> = (0..6).map(|k| Complex64::new(k as f64, -(k as f64))).collect();
        let m = ComplexMatrix::new(2, 3, entries.clone()).unwrap();
        assert_eq!(m.row_major(), entries);
        assert_eq!(m.get(1, 2), Complex64::new(5.0, -5.0));
    }

    #[test]
    fn hermitian_residual_detects_asymmetry() {
        let h = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.5),
                Complex64::new(0.5, -0.5),
                Complex64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(h.hermitian_residual(), 0.0);
        let mut g = h.clone();
        g.set(0, 1, Complex64::new(0.5, 0.6));
        assert!(g.hermitian_residual() > 0.09);
    }

    #[test]
    fn kron_block_layout() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let id = ComplexMatrix::identity(2);
        let k = a.kron(&id);
        // entry ((i,k),(j,l)) = a[i,j] * delta_kl
        assert_eq!(k.get(0, 2).re, 2.0);
        assert_eq!(k.get(1, 3).re, 2.0);
        assert_eq!(k.get(0, 3).re, 0.0);
        assert_eq!(k.get(2, 0).re, 3.0);
    }

    #[test]
    fn block_extraction() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| Complex64::new((4 * i + j) as f64, 0.0));
        let b = m.block(1, 0, 2);
        assert_eq!(b.get(0, 0).re, 8.0);
        assert_eq!(b.get(1, 1).re, 13.0);
    }
}
