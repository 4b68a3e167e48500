//! Face geometry of C_n: the dimension of the face generated by a member,
//! two independent extremality tests, tangent directions, boundary steps
//! and face extension.
//!
//! The face generated by a member `A` consists of exactly the members whose
//! range lies inside `range(A)`. Compressing by a range isometry `V`
//! identifies it with the set of PSD r×r matrices `M` whose lift `V M V*`
//! meets the block-trace conditions, and the compression `V* A V` of the
//! generator is positive definite, i.e. an interior point of that slice.
//! The face dimension is therefore the dimension of the affine solution
//! space of the trace constraints, which is what [`TraceConstraintMap`]
//! measures.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{block_trace, kraus_from_choi, require_member, ChoiMatrix};
use crate::eigen::{hermitian_eigen, inv_sqrt_pd, psd_eigen, range_isometry};
use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix, Tolerances};

/// Real linear map from the coordinates of an r×r Hermitian matrix `M` to
/// the n² block-trace coordinates of `V M V*`.
///
/// Coordinates of `M` are the r diagonal entries followed by the real and
/// imaginary parts of the above-diagonal entries in row-major order. Rows
/// are the n diagonal traces followed by (real, imaginary) pairs for the
/// above-diagonal traces in row-major order.
#[derive(Debug, Clone)]
pub struct TraceConstraintMap {
    n: usize,
    r: usize,
    isometry: ComplexMatrix,
    matrix: DMatrix<f64>,
}

/// Hermitian r×r matrix from its real coordinate vector.
pub fn coords_to_hermitian(r: usize, coords: &[f64]) -> ComplexMatrix {
    assert_eq!(coords.len(), r * r, "coordinate count must be r^2");
    let mut m = ComplexMatrix::zeros(r, r);
    for a in 0..r {
        m.set(a, a, Complex64::new(coords[a], 0.0));
    }
    let mut idx = r;
    for a in 0..r {
        for b in a + 1..r {
            let v = Complex64::new(coords[idx], coords[idx + 1]);
            idx += 2;
            m.set(a, b, v);
            m.set(b, a, v.conj());
        }
    }
    m
}

/// Real coordinate vector of a Hermitian r×r matrix.
pub fn hermitian_to_coords(m: &ComplexMatrix) -> Vec<f64> {
    let r = m.rows();
    let mut coords = Vec::with_capacity(r * r);
    for a in 0..r {
        coords.push(m.get(a, a).re);
    }
    for a in 0..r {
        for b in a + 1..r {
            let v = m.get(a, b);
            coords.push(v.re);
            coords.push(v.im);
        }
    }
    coords
}

impl TraceConstraintMap {
    /// Builds the constraint map of the face generated by a member.
    pub fn build(c: &ChoiMatrix, tol: &Tolerances) -> Result<Self> {
        require_member(c, tol)?;
        let n = c.n();
        let isometry = range_isometry(c.matrix(), tol)?;
        let r = isometry.cols();

        // K_ij = V_j* V_i satisfies tr(block (i,j) of V M V*) = tr(M K_ij),
        // so every column of the map is read off one K entry at a time.
        let chunk = |i: usize| ComplexMatrix::from_inner(isometry.inner.rows(i * n, n).into_owned());
        let chunks: Vec<ComplexMatrix> = (0..n).map(chunk).collect();
        let mut k = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                k.push(chunks[j].adjoint().matmul(&chunks[i]));
            }
        }
        let k_ij = |i: usize, j: usize| &k[i * n + j];

        let mut matrix = DMatrix::<f64>::zeros(n * n, r * r);
        let mut fill = |col: usize, trace_of: &dyn Fn(usize, usize) -> Complex64| {
            let mut row = 0;
            for i in 0..n {
                matrix[(row, col)] = trace_of(i, i).re;
                row += 1;
            }
            for i in 0..n {
                for j in i + 1..n {
                    let t = trace_of(i, j);
                    matrix[(row, col)] = t.re;
                    matrix[(row + 1, col)] = t.im;
                    row += 2;
                }
            }
        };
        let mut col = 0;
        for a in 0..r {
            fill(col, &|i, j| k_ij(i, j).get(a, a));
            col += 1;
        }
        for a in 0..r {
            for b in a + 1..r {
                fill(col, &|i, j| k_ij(i, j).get(b, a) + k_ij(i, j).get(a, b));
                let im = Complex64::new(0.0, 1.0);
                fill(col + 1, &|i, j| {
                    im * (k_ij(i, j).get(b, a) - k_ij(i, j).get(a, b))
                });
                col += 2;
            }
        }

        Ok(Self {
            n,
            r,
            isometry,
            matrix,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the generating member.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn isometry(&self) -> &ComplexMatrix {
        &self.isometry
    }

    /// The constraint matrix entries, row-major (n² rows, r² columns).
    pub fn entries_row_major(&self) -> Vec<f64> {
        let (rows, cols) = self.matrix.shape();
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                out.push(self.matrix[(i, j)]);
            }
        }
        out
    }

    /// Block-trace coordinates of `V M V*` for a Hermitian r×r `M`.
    pub fn evaluate(&self, m: &ComplexMatrix) -> Vec<f64> {
        let coords = nalgebra::DVector::from_vec(hermitian_to_coords(m));
        (&self.matrix * coords).iter().cloned().collect()
    }

    /// The coordinates every member of the face must hit: ones on the n
    /// diagonal traces, zeros elsewhere.
    pub fn target(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.n * self.n];
        for v in t.iter_mut().take(self.n) {
            *v = 1.0;
        }
        t
    }

    /// Compression `V* m V` of an ambient n²×n² matrix.
    pub fn compress(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.isometry.adjoint().matmul(m).matmul(&self.isometry)
    }

    fn sorted_singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .matrix
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .cloned()
            .collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    /// Numerical rank of the constraint matrix together with the spectral
    /// gap between the smallest kept and largest dropped singular value
    /// (infinite when nothing is dropped).
    pub fn rank_and_gap(&self, tol: &Tolerances) -> (usize, f64) {
        let sv = self.sorted_singular_values();
        let smax = sv.first().copied().unwrap_or(0.0);
        let threshold = tol.rank_rel * smax.max(1.0);
        let rank = sv.iter().filter(|&&s| s > threshold).count();
        let gap = if rank == 0 || rank == sv.len() || sv[rank] == 0.0 {
            f64::INFINITY
        } else {
            sv[rank - 1] / sv[rank]
        };
        (rank, gap)
    }

    /// Dimension of the affine solution space, i.e. the face dimension.
    pub fn solution_dimension(&self, tol: &Tolerances) -> usize {
        self.r * self.r - self.rank_and_gap(tol).0
    }

    /// Orthonormal basis of the real kernel of the constraint matrix.
    ///
    /// The kernel is extracted as the top eigenspace of the projector onto
    /// the orthogonal complement of the row space; the 0/1 spectrum of the
    /// projector keeps the basis well conditioned even when the constraint
    /// matrix itself is not.
    pub fn kernel_coords(&self, tol: &Tolerances) -> Vec<Vec<f64>> {
        let dim = self.r * self.r;
        let svd = self.matrix.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let threshold = tol.rank_rel * smax.max(1.0);

        let mut projector = DMatrix::<f64>::identity(dim, dim);
        let mut rank = 0;
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > threshold {
                rank += 1;
                let row = v_t.row(k);
                for a in 0..dim {
                    for b in 0..dim {
                        projector[(a, b)] -= row[a] * row[b];
                    }
                }
            }
        }
        let kernel_dim = dim - rank;
        if kernel_dim == 0 {
            return Vec::new();
        }

        let eig = projector.symmetric_eigen();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
        let mut basis = Vec::with_capacity(kernel_dim);
        for &k in order.iter().take(kernel_dim) {
            debug_assert!(eig.eigenvalues[k] > 0.5, "projector spectrum must be 0/1");
            basis.push(eig.eigenvectors.column(k).iter().cloned().collect());
        }
        basis
    }

    /// Lifts kernel coordinates to an ambient Hermitian direction `V N V*`.
    pub fn direction(&self, coords: &[f64]) -> ComplexMatrix {
        let n_mat = coords_to_hermitian(self.r, coords);
        self.isometry.matmul(&n_mat).matmul(&self.isometry.adjoint())
    }
}

/// Aggregated face data of a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceReport {
    pub n: usize,
    pub rank: usize,
    pub face_dim: usize,
    pub is_extreme: bool,
    pub choi_criterion_extreme: bool,
    pub kernel_dim: usize,
}

/// Dimension of the face of C_n generated by a member.
pub fn face_dimension(c: &ChoiMatrix, tol: &Tolerances) -> Result<usize> {
    Ok(TraceConstraintMap::build(c, tol)?.solution_dimension(tol))
}

/// Whether the member generates a zero-dimensional face.
pub fn is_extreme(c: &ChoiMatrix, tol: &Tolerances) -> Result<bool> {
    Ok(face_dimension(c, tol)? == 0)
}

/// Independent extremality oracle: the products `A_i* A_j` over a minimal
/// Kraus set are linearly independent exactly at extreme points.
pub fn choi_criterion_extreme(c: &ChoiMatrix, tol: &Tolerances) -> Result<bool> {
    let kraus = kraus_from_choi(c, tol)?;
    let n = c.n();
    let r = kraus.len();
    let ops = kraus.operators();
    let mut stacked = DMatrix::<Complex64>::zeros(r * r, n * n);
    for (row, (i, j)) in (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .enumerate()
    {
        let prod = ops[i].adjoint().matmul(&ops[j]);
        for a in 0..n {
            for b in 0..n {
                stacked[(row, a * n + b)] = prod.get(a, b);
            }
        }
    }
    let mut sv: Vec<f64> = stacked.svd(false, false).singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let smax = sv.first().copied().unwrap_or(0.0);
    let threshold = tol.rank_rel * smax.max(1.0);
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    Ok(rank == r * r)
}

/// Hermitian, block-traceless directions spanning the face at its
/// generator; empty exactly at extreme points.
pub fn face_direction_basis(c: &ChoiMatrix, tol: &Tolerances) -> Result<Vec<ComplexMatrix>> {
    let map = TraceConstraintMap::build(c, tol)?;
    Ok(map
        .kernel_coords(tol)
        .iter()
        .map(|coords| map.direction(coords))
        .collect())
}

/// Both extremality verdicts plus rank and kernel data in one pass.
pub fn face_report(c: &ChoiMatrix, tol: &Tolerances) -> Result<FaceReport> {
    let map = TraceConstraintMap::build(c, tol)?;
    let n = c.n();
    let rank = map.r();
    let face_dim = map.solution_dimension(tol);
    let is_extreme = face_dim == 0;
    let choi = choi_criterion_extreme(c, tol)?;
    assert!(
        !is_extreme || rank <= n,
        "extreme point of rank {rank} > n = {n}: numerical invariant breach"
    );
    Ok(FaceReport {
        n,
        rank,
        face_dim,
        is_extreme,
        choi_criterion_extreme: choi,
        kernel_dim: n * n - rank,
    })
}

fn direction_scale(delta: &ComplexMatrix) -> f64 {
    delta.max_abs().max(1.0)
}

/// Walks from a member along a tangent direction to the relative boundary
/// of its face.
///
/// Returns the maximal step `t_max` with `c + t_max * delta` still in C_n
/// together with that boundary point, whose rank is strictly smaller.
pub fn boundary_step(
    c: &ChoiMatrix,
    delta: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<(f64, ChoiMatrix)> {
    require_member(c, tol)?;
    let dim = c.dim();
    if delta.rows() != dim || delta.cols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: if delta.rows() != dim { delta.rows() } else { delta.cols() },
        });
    }
    if delta.max_abs() == 0.0 {
        return Err(Error::InvalidDirection("direction is zero".into()));
    }
    let scale = direction_scale(delta);
    if delta.hermitian_residual() > tol.equality_abs * scale {
        return Err(Error::InvalidDirection("direction is not Hermitian".into()));
    }
    if block_trace(delta, c.n()).max_abs() > tol.equality_abs * scale {
        return Err(Error::InvalidDirection(
            "direction has nonzero block traces".into(),
        ));
    }
    let isometry = range_isometry(c.matrix(), tol)?;
    let projected = isometry.matmul(&isometry.adjoint().matmul(delta));
    if (delta - &projected).max_abs() > tol.equality_abs * scale {
        return Err(Error::InvalidDirection(
            "direction leaves the range of the base point".into(),
        ));
    }

    let center = isometry.adjoint().matmul(c.matrix()).matmul(&isometry);
    let whitener = inv_sqrt_pd(&center.symmetrized(), tol)?;
    let compressed = isometry.adjoint().matmul(delta).matmul(&isometry);
    let whitened = whitener.matmul(&compressed).matmul(&whitener).symmetrized();
    let eig = hermitian_eigen(&whitened, tol)?;
    let min_eigenvalue = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eigenvalue >= -tol.psd_abs {
        return Err(Error::DegenerateDirection { min_eigenvalue });
    }
    let t_max = -1.0 / min_eigenvalue;
    let stepped = c.matrix() + &delta.scale_re(t_max);
    Ok((t_max, ChoiMatrix::new(c.n(), stepped)?))
}

/// Builds a member whose face strictly contains the face of `c` and whose
/// rank is exactly one larger, by averaging with a rank-1 member built from
/// a kernel vector. Requires `rank(c) <= n^2 - 2`.
///
/// Deterministic by default: the first kernel basis vector, its first
/// sizable entry, and the cyclic chunk permutation are used. A seed
/// randomizes the kernel vector and the permutation instead.
pub fn extend_face(c: &ChoiMatrix, seed: Option<u64>, tol: &Tolerances) -> Result<ChoiMatrix> {
    require_member(c, tol)?;
    let n = c.n();
    let eig = psd_eigen(c.matrix(), tol)?;
    let rank = eig.rank(tol);
    if rank > n * n - 2 {
        return Err(Error::RankTooHigh {
            rank,
            max: n * n - 2,
        });
    }
    let kernel_dim = n * n - rank;

    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let x: Vec<Complex64> = match rng.as_mut() {
        None => eig.eigenvectors.column(rank),
        Some(rng) => {
            let mut combo = vec![Complex64::new(0.0, 0.0); n * n];
            for k in 0..kernel_dim {
                let w = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                let col = eig.eigenvectors.column(rank + k);
                for (acc, v) in combo.iter_mut().zip(col.iter()) {
                    *acc += w * v;
                }
            }
            let norm: f64 = combo.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            combo.iter().map(|z| z / norm).collect()
        }
    };

    // first comfortably nonzero entry keeps the overlap with the kernel
    // vector away from the rank cutoff
    let (chunk, entry) = {
        let mut pick = None;
        for i in 0..n {
            for j in 0..n {
                if x[i * n + j].norm() > 1e-3 {
                    pick = Some((i, j));
                    break;
                }
            }
            if pick.is_some() {
                break;
            }
        }
        pick.unwrap_or_else(|| {
            let best = (0..n * n).max_by(|&a, &b| {
                x[a].norm().partial_cmp(&x[b].norm()).unwrap()
            });
            let a = best.expect("kernel vector is nonempty");
            (a / n, a % n)
        })
    };

    // permutation with sigma(chunk) = entry
    let sigma: Vec<usize> = match rng.as_mut() {
        None => (0..n).map(|k| (entry + n + k - chunk) % n).collect(),
        Some(rng) => {
            let mut rest: Vec<usize> = (0..n).filter(|&v| v != entry).collect();
            // Fisher-Yates on the remaining values
            for k in (1..rest.len()).rev() {
                let swap = rng.gen_range(0..=k);
                rest.swap(k, swap);
            }
            let mut sigma = vec![0usize; n];
            sigma[chunk] = entry;
            let mut it = rest.into_iter();
            for (k, slot) in sigma.iter_mut().enumerate() {
                if k != chunk {
                    *slot = it.next().expect("one value per remaining chunk");
                }
            }
            sigma
        }
    };

    let off_overlap: Complex64 = (0..n)
        .filter(|&k| k != chunk)
        .map(|k| x[k * n + sigma[k]])
        .sum();
    let own = x[chunk * n + entry];
    // theta in {0, pi/2}, whichever keeps <u, x> farther from zero
    let phase = if (off_overlap + own).norm() >= (off_overlap - Complex64::new(0.0, 1.0) * own).norm()
    {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    };

    let mut u = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        u[k * n + sigma[k]] = if k == chunk { phase } else { Complex64::new(1.0, 0.0) };
    }
    let extended = (c.matrix() + &ComplexMatrix::outer(&u)).scale_re(0.5);
    ChoiMatrix::new(n, extended)
}
