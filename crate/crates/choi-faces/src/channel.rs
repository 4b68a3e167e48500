//! Kraus and Choi representations of quantum channels, conversions between
//! them, and membership tests for the convex set C_n.
//!
//! The Choi matrix of a channel `L` is laid out in n×n blocks with block
//! `(i, j)` equal to `L(E_ij)`. Stacking the columns of a Kraus operator
//! `A` into one vector `v` (chunk `i` of `v` is column `i` of `A`) turns the
//! channel sum into `Z = sum_t v_t v_t*`, which pins the reshaping
//! convention used by both conversion directions. Worked 2×2 example: the
//! identity channel `{I_2}` stacks to `v = (1, 0, 0, 1)` and its Choi matrix
//! has ones exactly at entries (0,0), (0,3), (3,0), (3,3).

use std::fmt;

use crate::eigen::{hermitian_eigen, psd_eigen, range_isometry};
use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix, Tolerances};

/// A nonempty set of n×n Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausSet {
    n: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or(Error::DimensionMismatch {
            expected: 1,
            got: 0,
        })?;
        let n = first.rows();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for op in &operators {
            if op.rows() != n || op.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: if op.rows() != n { op.rows() } else { op.cols() },
                });
            }
        }
        Ok(Self { n, operators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Max-norm of `sum_i A_i* A_i - I`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.n, self.n);
        for op in &self.operators {
            sum = &sum + &op.adjoint().matmul(op);
        }
        (&sum - &ComplexMatrix::identity(self.n)).max_abs()
    }

    pub fn is_trace_preserving(&self, tol: &Tolerances) -> bool {
        self.completeness_residual() <= tol.equality_abs
    }

    /// Applies the channel `X -> sum_i A_i X A_i*`.
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for op in &self.operators {
            out = &out + &op.matmul(x).matmul(&op.adjoint());
        }
        out
    }
}

/// An n²×n² matrix tagged with the channel dimension n.
///
/// The type only guarantees the shape; positivity, hermiticity and the
/// block-trace conditions are measured by [`check_membership`] so that
/// defective inputs can be diagnosed instead of rejected at parse time.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    n: usize,
    m: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(n: usize, m: ComplexMatrix) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadDimension { n });
        }
        if m.rows() != n * n || m.cols() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: if m.rows() != n * n { m.rows() } else { m.cols() },
            });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// The n×n block `(i, j)`, i.e. `L(E_ij)`.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        self.m.block(i, j, self.n)
    }
}

/// The n×n matrix of block traces of an n²×n² matrix.
pub fn block_trace(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| m.get(i * n + k, j * n + k)).sum()
    })
}

/// Residuals of the three membership conditions for C_n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipReport {
    pub hermitian_residual: f64,
    pub min_eigenvalue: f64,
    pub max_trace_condition_residual: f64,
    pub is_member: bool,
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermitian residual {:e}, min eigenvalue {:e}, trace residual {:e}",
            self.hermitian_residual, self.min_eigenvalue, self.max_trace_condition_residual
        )
    }
}

/// Builds the Choi matrix `[L(E_ij)]` of the channel given by a Kraus set.
///
/// The output is PSD for every Kraus set; it lies in C_n exactly when the
/// set is trace preserving.
pub fn choi_from_kraus(k: &KrausSet) -> ChoiMatrix {
    let n = k.n();
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for op in k.operators() {
        // v[(i, k)] = op[k, i]: stacked columns
        let v: Vec<Complex64> = (0..n * n).map(|a| op.get(a % n, a / n)).collect();
        m = &m + &ComplexMatrix::outer(&v);
    }
    ChoiMatrix { n, m }
}

/// Recovers a minimal Kraus set from a member of C_n.
///
/// Eigenvalues below the rank cutoff are dropped, so the operator count
/// equals the Choi rank and `choi_from_kraus` reproduces the input within
/// numerical accuracy.
pub fn kraus_from_choi(c: &ChoiMatrix, tol: &Tolerances) -> Result<KrausSet> {
    let report = check_membership(c, tol);
    if !report.is_member {
        return Err(Error::NotMember(report));
    }
    let n = c.n();
    let eig = psd_eigen(&c.m, tol)?;
    let rank = eig.rank(tol);
    let mut operators = Vec::with_capacity(rank);
    for t in 0..rank {
        let scale = eig.eigenvalues[t].sqrt();
        let col = eig.eigenvectors.column(t);
        operators.push(ComplexMatrix::from_fn(n, n, |k, i| {
            col[i * n + k] * scale
        }));
    }
    KrausSet::new(operators)
}

/// Measures the three conditions defining C_n; reports, never fails.
pub fn check_membership(c: &ChoiMatrix, tol: &Tolerances) -> MembershipReport {
    let hermitian_residual = c.m.hermitian_residual();
    let sym = c.m.symmetrized();
    // symmetric_eigen on an exactly Hermitian matrix cannot fail
    let relaxed = Tolerances {
        equality_abs: f64::MAX,
        ..*tol
    };
    let eig = hermitian_eigen(&sym, &relaxed).expect("symmetrized matrix is Hermitian");
    let min_eigenvalue = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let bt = block_trace(&c.m, c.n());
    let max_trace_condition_residual = (&bt - &ComplexMatrix::identity(c.n())).max_abs();
    let is_member = hermitian_residual <= tol.equality_abs
        && min_eigenvalue >= -tol.psd_abs
        && max_trace_condition_residual <= tol.equality_abs;
    MembershipReport {
        hermitian_residual,
        min_eigenvalue,
        max_trace_condition_residual,
        is_member,
    }
}

/// Convenience gate: the membership report as an error when not a member.
pub fn require_member(c: &ChoiMatrix, tol: &Tolerances) -> Result<()> {
    let report = check_membership(c, tol);
    if report.is_member {
        Ok(())
    } else {
        Err(Error::NotMember(report))
    }
}

/// Whether `x x*` lies in C_n, i.e. whether the n chunks of `x` form an
/// orthonormal set. Agrees with `check_membership` on the outer product.
///
/// Panics if the length of `x` is not a perfect square.
pub fn rank1_membership(x: &[Complex64], tol: &Tolerances) -> bool {
    let n = (x.len() as f64).sqrt().round() as usize;
    assert_eq!(n * n, x.len(), "vector length must be a perfect square");
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let ip: Complex64 = (0..n)
                .map(|k| x[j * n + k].conj() * x[i * n + k])
                .sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - Complex64::new(target, 0.0)).norm());
        }
    }
    worst <= tol.equality_abs
}

/// Conjugates every block by a unitary: `[A_ij] -> [U A_ij U*]`.
///
/// Membership, rank and face data are preserved; kernel vectors transform
/// chunkwise by `U`.
pub fn conjugate_blocks(c: &ChoiMatrix, u: &ComplexMatrix, tol: &Tolerances) -> Result<ChoiMatrix> {
    let n = c.n();
    if u.rows() != n || u.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if u.rows() != n { u.rows() } else { u.cols() },
        });
    }
    let residual = u.isometry_residual();
    if residual > tol.equality_abs {
        return Err(Error::NotUnitary { residual });
    }
    require_member(c, tol)?;
    let w = ComplexMatrix::identity(n).kron(u);
    let m = w.matmul(&c.m).matmul(&w.adjoint());
    Ok(ChoiMatrix { n, m })
}

/// Choi rank of a member, gated on membership.
pub fn member_rank(c: &ChoiMatrix, tol: &Tolerances) -> Result<usize> {
    require_member(c, tol)?;
    Ok(psd_eigen(&c.m, tol)?.rank(tol))
}

/// Orthonormal kernel basis of a member, gated on membership.
pub fn member_kernel(c: &ChoiMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    require_member(c, tol)?;
    crate::eigen::kernel_basis(&c.m, tol)
}

/// Range isometry of a member, gated on membership.
pub fn member_range(c: &ChoiMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    require_member(c, tol)?;
    range_isometry(&c.m, tol)
}
