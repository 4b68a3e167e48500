//! Named example members of C_n used as fixtures and CLI-emittable
//! documents, plus seeded random members of prescribed rank.
//!
//! Surd-valued entries are computed from integer-and-square-root
//! expressions at construction time so algebraic identities between the
//! fixtures hold to machine precision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{block_trace, check_membership, ChoiMatrix};
use crate::eigen::{inv_sqrt_pd, numerical_rank, psd_eigen};
use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix, Tolerances};

fn c_re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// 9 / (4 sqrt 6)
fn coupling_strong() -> f64 {
    9.0 / (4.0 * 6f64.sqrt())
}

/// 3 / (2 sqrt 6)
fn coupling_weak() -> f64 {
    3.0 / (2.0 * 6f64.sqrt())
}

/// The 3×3 singular correlation matrix behind the `a3` fixture.
///
/// It is PSD with a one-dimensional kernel spanned by
/// `[1, -2/sqrt(6), -1/sqrt(6)]`.
pub fn p_matrix() -> ComplexMatrix {
    let a = coupling_strong();
    let b = coupling_weak();
    ComplexMatrix::from_real(3, 3, &[1.0, a, b, a, 1.0, 0.25, b, 0.25, 1.0])
        .expect("static entries are finite")
}

/// Symmetric coefficient matrix of the `an` family; equals `p_matrix` at n = 3.
fn an_coefficients(n: usize) -> Vec<Vec<f64>> {
    let a = coupling_strong();
    let b = coupling_weak();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n - 2 {
        for j in 0..n - 2 {
            k[i][j] = 1.0;
        }
        k[i][n - 2] = a;
        k[n - 2][i] = a;
        k[i][n - 1] = b;
        k[n - 1][i] = b;
    }
    k[n - 2][n - 2] = 1.0;
    k[n - 1][n - 1] = 1.0;
    k[n - 2][n - 1] = 0.25;
    k[n - 1][n - 2] = 0.25;
    k
}

/// Rank-2 member of C_n whose face has dimension 1, for any n ≥ 3.
///
/// Block `(i, j)` is a multiple of `E_ij`, so the only nonzero entries sit
/// at positions `(i(n+1), j(n+1))` and carry the coefficient matrix.
pub fn an_family(n: usize) -> Result<ChoiMatrix> {
    if n < 3 {
        return Err(Error::BadDimension { n });
    }
    let k = an_coefficients(n);
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m.set(i * n + i, j * n + j, c_re(k[i][j]));
        }
    }
    ChoiMatrix::new(n, m)
}

/// The n = 3 member of the family: rank 2, face dimension 1.
pub fn a3() -> ChoiMatrix {
    an_family(3).expect("n = 3 is valid")
}

/// The two rank-1 extreme points whose midpoint is `a3()`.
pub fn a3_extremes() -> (ChoiMatrix, ChoiMatrix) {
    let cos_theta = coupling_strong();
    let sin_theta = (5f64 / 2.0).sqrt() / 4.0;
    let cos_phi = coupling_weak();
    let sin_phi = -(5f64 / 2.0).sqrt() / 2.0;
    let mut x = vec![c_re(0.0); 9];
    x[0] = c_re(1.0);
    x[4] = Complex64::new(cos_theta, -sin_theta);
    x[8] = Complex64::new(cos_phi, -sin_phi);
    let xm = ComplexMatrix::outer(&x);
    let x1m = xm.conjugate();
    (
        ChoiMatrix::new(3, xm).expect("9x9"),
        ChoiMatrix::new(3, x1m).expect("9x9"),
    )
}

/// Rank-2 extreme point of C_n built from two chunked basis vectors,
/// for n ≥ 3.
pub fn case_iia_example(n: usize) -> Result<ChoiMatrix> {
    if n < 3 {
        return Err(Error::BadDimension { n });
    }
    let mut y = vec![c_re(0.0); n * n];
    y[0] = c_re(1.0);
    let mut z = vec![c_re(0.0); n * n];
    for k in 1..n {
        z[k * n + (k - 1)] = c_re(1.0);
    }
    let m = &ComplexMatrix::outer(&y) + &ComplexMatrix::outer(&z);
    ChoiMatrix::new(n, m)
}

/// Indices (0-based) of the principal submatrix that embeds C_{n-1} in C_n:
/// all positions except the first chunk and the first entry of every chunk.
fn embedding_indices(n: usize) -> Vec<usize> {
    let mut s = Vec::with_capacity((n - 1) * (n - 1));
    for q in 1..n {
        for r in 1..n {
            s.push(q * n + r);
        }
    }
    s
}

/// Rank-2 member of C_n with face dimension 2, built by padding a rank-1
/// extreme point of C_{n-1} with a decoupled pure block. Requires n ≥ 3.
pub fn embed_rank1_example(n: usize) -> Result<ChoiMatrix> {
    if n < 3 {
        return Err(Error::BadDimension { n });
    }
    let m = n - 1;
    let mut v = vec![c_re(0.0); m * m];
    for k in 0..m {
        v[k * m + k] = c_re(1.0);
    }
    let b = ComplexMatrix::outer(&v);
    let s = embedding_indices(n);
    let mut a = ComplexMatrix::zeros(n * n, n * n);
    a.set(0, 0, c_re(1.0));
    for (p, &sp) in s.iter().enumerate() {
        for (q, &sq) in s.iter().enumerate() {
            a.set(sp, sq, b.get(p, q));
        }
    }
    ChoiMatrix::new(n, a)
}

/// Embeds a rank-2 extreme point of C_{n-1} (with nonzero leading entry)
/// into an extreme point of C_n by tying the padded row to the first
/// embedded column.
pub fn embed_rank2_extreme(b: &ChoiMatrix) -> Result<ChoiMatrix> {
    let n = b.n() + 1;
    let b00 = b.matrix().get(0, 0).re;
    if b00 <= 1e-12 {
        return Err(Error::Infeasible(
            "embedded member needs a positive leading entry".into(),
        ));
    }
    let s = embedding_indices(n);
    let mut a = ComplexMatrix::zeros(n * n, n * n);
    a.set(0, 0, c_re(1.0));
    let scale = c_re(1.0 / b00.sqrt());
    for (p, &sp) in s.iter().enumerate() {
        for (q, &sq) in s.iter().enumerate() {
            a.set(sp, sq, b.matrix().get(p, q));
        }
        let tied = b.matrix().get(0, p) * scale;
        a.set(0, sp, tied);
        a.set(sp, 0, tied.conj());
    }
    ChoiMatrix::new(n, a)
}

/// Parameters of the 4×4 rank-2 family in C_2.
#[derive(Debug, Clone, Copy)]
pub struct Rank2FamilyN2Params {
    pub c: f64,
    pub s: Complex64,
    pub y: Complex64,
}

/// The 4×4 family member
/// `[[1, 0, 0, y], [0, 0, 0, 0], [0, 0, 1-c, s], [y*, 0, s*, c]]`.
/// Fails with `Infeasible` when the parameters do not give a PSD matrix.
pub fn rank2_family_n2(p: &Rank2FamilyN2Params, tol: &Tolerances) -> Result<ChoiMatrix> {
    let z = c_re(0.0);
    let m = ComplexMatrix::new(
        4,
        4,
        vec![
            c_re(1.0),
            z,
            z,
            p.y,
            z,
            z,
            z,
            z,
            z,
            z,
            c_re(1.0 - p.c),
            p.s,
            p.y.conj(),
            z,
            p.s.conj(),
            c_re(p.c),
        ],
    )?;
    match psd_eigen(&m, tol) {
        Ok(_) => ChoiMatrix::new(2, m),
        Err(Error::NotPsd { min_eigenvalue }) => Err(Error::Infeasible(format!(
            "parameters give min eigenvalue {min_eigenvalue:e}"
        ))),
        Err(e) => Err(e),
    }
}

/// Haar-distributed n×n unitary from a seeded complex Ginibre draw.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(n, n, &mut rng);
    let qr = g.inner.qr();
    let r = qr.r();
    let q = qr.q();
    let phases: Vec<Complex64> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                c_re(1.0)
            }
        })
        .collect();
    ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * phases[j])
}

fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(rows, cols, entries).expect("gaussian draws are finite")
}

/// Seeded random member of C_n with rank exactly `r`.
///
/// Draws an n²×r complex Gaussian factor, forms the Wishart matrix, and
/// conjugates by `R^{-1/2} ⊗ I` where `R` is the block-trace matrix; this
/// is the unique congruence along the block index that lands exactly on
/// the block-trace conditions while preserving rank.
pub fn random_member(n: usize, r: usize, seed: u64, tol: &Tolerances) -> Result<ChoiMatrix> {
    if n == 0 {
        return Err(Error::BadDimension { n });
    }
    if r == 0 {
        return Err(Error::Infeasible("rank must be at least 1".into()));
    }
    if r > n * n {
        return Err(Error::RankTooHigh { rank: r, max: n * n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..10 {
        let g = ginibre(n * n, r, &mut rng);
        let b = g.matmul(&g.adjoint());
        let bt = block_trace(&b, n);
        let whitener = match inv_sqrt_pd(&bt.symmetrized(), &Tolerances {
            // the block-trace matrix is PSD by construction; reject only
            // genuinely singular draws
            psd_abs: tol.psd_abs,
            ..*tol
        }) {
            Ok(w) => w,
            Err(_) => continue,
        };
        let w = whitener.kron(&ComplexMatrix::identity(n));
        let m = w.matmul(&b).matmul(&w.adjoint()).symmetrized();
        let candidate = ChoiMatrix::new(n, m)?;
        if numerical_rank(candidate.matrix(), tol)? == r
            && check_membership(&candidate, tol).is_member
        {
            return Ok(candidate);
        }
    }
    Err(Error::DegenerateSample)
}

/// Exact names accepted by the examples catalog.
pub const CATALOG_NAMES: [&str; 9] = [
    "p",
    "a3",
    "a3-extreme-x",
    "a3-extreme-x1",
    "an",
    "case-iia",
    "embed-rank1",
    "rank2-n2",
    "random",
];

/// Parameters consumed by the catalog; each entry reads only the fields it
/// needs.
#[derive(Debug, Clone, Copy)]
pub struct CatalogParams {
    pub n: usize,
    pub rank: usize,
    pub seed: u64,
    pub c: f64,
    pub s: Complex64,
    pub y: Complex64,
}

impl Default for CatalogParams {
    fn default() -> Self {
        Self {
            n: 3,
            rank: 1,
            seed: 0,
            c: 1.0,
            s: c_re(0.0),
            y: c_re(0.0),
        }
    }
}

/// A catalog output: either a member of C_n or a bare matrix fixture.
#[derive(Debug, Clone)]
pub enum CatalogEntry {
    Choi(ChoiMatrix),
    Matrix(ComplexMatrix),
}

/// Looks up a named construction.
pub fn catalog_entry(
    name: &str,
    params: &CatalogParams,
    tol: &Tolerances,
) -> Result<CatalogEntry> {
    match name {
        "p" => Ok(CatalogEntry::Matrix(p_matrix())),
        "a3" => Ok(CatalogEntry::Choi(a3())),
        "a3-extreme-x" => Ok(CatalogEntry::Choi(a3_extremes().0)),
        "a3-extreme-x1" => Ok(CatalogEntry::Choi(a3_extremes().1)),
        "an" => Ok(CatalogEntry::Choi(an_family(params.n)?)),
        "case-iia" => Ok(CatalogEntry::Choi(case_iia_example(params.n)?)),
        "embed-rank1" => Ok(CatalogEntry::Choi(embed_rank1_example(params.n)?)),
        "rank2-n2" => Ok(CatalogEntry::Choi(rank2_family_n2(
            &Rank2FamilyN2Params {
                c: params.c,
                s: params.s,
                y: params.y,
            },
            tol,
        )?)),
        "random" => Ok(CatalogEntry::Choi(random_member(
            params.n,
            params.rank,
            params.seed,
            tol,
        )?)),
        _ => Err(Error::UnknownExample {
            name: name.to_string(),
            available: CATALOG_NAMES.join(", "),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::member_kernel;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn p_matrix_entries_and_kernel() {
        let p = p_matrix();
        assert!((p.get(0, 1).re - 0.9185586535436918).abs() < 1e-12);
        assert!((p.get(1, 2).re - 0.25).abs() < 1e-15);
        let q = [
            c_re(1.0),
            c_re(-2.0 / 6f64.sqrt()),
            c_re(-1.0 / 6f64.sqrt()),
        ];
        let pq = p.apply(&q);
        let norm: f64 = pq.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm < 1e-12);
    }

    #[test]
    fn a3_structure() {
        let t = tol();
        let c = a3();
        assert!(check_membership(&c, &t).is_member);
        assert_eq!(numerical_rank(c.matrix(), &t).unwrap(), 2);
        // the {0,4,8} compression is exactly P
        let p = p_matrix();
        let idx = [0usize, 4, 8];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                assert_eq!(c.matrix().get(i, j), p.get(a, b));
            }
        }
        // block (0,0) is E_11
        let b00 = c.block(0, 0);
        assert_eq!(b00.get(0, 0), c_re(1.0));
        assert!((b00.max_abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn a3_kernel_matches_stated_basis() {
        let t = tol();
        let c = a3();
        let kernel = member_kernel(&c, &t).unwrap();
        assert_eq!(kernel.cols(), 7);
        // e_2, e_3, e_4, e_6, e_7, e_8 (1-based) and the surd combination
        // (0-based indices 1, 2, 3, 5, 6, 7)
        for idx in [1usize, 2, 3, 5, 6, 7] {
            let mut v = vec![c_re(0.0); 9];
            v[idx] = c_re(1.0);
            let img = c.matrix().apply(&v);
            let norm: f64 = img.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(norm < 1e-12, "e_{idx} not in kernel");
        }
        let mut v = vec![c_re(0.0); 9];
        v[0] = c_re(1.0);
        v[4] = c_re(-2.0 / 6f64.sqrt());
        v[8] = c_re(-1.0 / 6f64.sqrt());
        let img = c.matrix().apply(&v);
        let norm: f64 = img.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm < 1e-12);
    }

    #[test]
    fn a3_extremes_average_to_a3() {
        let t = tol();
        let (x, x1) = a3_extremes();
        assert!(check_membership(&x, &t).is_member);
        assert!(check_membership(&x1, &t).is_member);
        assert_eq!(numerical_rank(x.matrix(), &t).unwrap(), 1);
        assert_eq!(numerical_rank(x1.matrix(), &t).unwrap(), 1);
        let avg = (x.matrix() + x1.matrix()).scale_re(0.5);
        assert!((&avg - a3().matrix()).max_abs() < 1e-12);
        // displayed entries of the {0,4,8} compression
        let e01 = x.matrix().get(0, 4);
        assert!((e01.re - coupling_strong()).abs() < 1e-14);
        assert!((e01.im - 5f64.sqrt() / (4.0 * 2f64.sqrt())).abs() < 1e-14);
        assert!((e01.norm_sqr() - 1.0).abs() < 1e-14);
        let e02 = x.matrix().get(0, 8);
        assert!((e02.re - coupling_weak()).abs() < 1e-14);
        assert!((e02.im + 5f64.sqrt() / (2.0 * 2f64.sqrt())).abs() < 1e-14);
        let e12 = x.matrix().get(4, 8);
        assert!((e12.re - 0.25).abs() < 1e-14);
        assert!((e12.im + 15f64.sqrt() / 4.0).abs() < 1e-14);
        // X1 is the entrywise conjugate
        assert!((&x1.matrix().conjugate() - x.matrix()).max_abs() == 0.0);
    }

    #[test]
    fn an_family_reduces_to_a3_and_extends() {
        let t = tol();
        assert!(matches!(an_family(2), Err(Error::BadDimension { n: 2 })));
        let a = an_family(3).unwrap();
        assert_eq!(a.matrix().row_major(), a3().matrix().row_major());
        for n in [4usize, 5] {
            let c = an_family(n).unwrap();
            assert!(check_membership(&c, &t).is_member, "n = {n}");
            assert_eq!(numerical_rank(c.matrix(), &t).unwrap(), 2, "n = {n}");
        }
    }

    #[test]
    fn case_iia_structure() {
        let t = tol();
        for n in [3usize, 4] {
            let c = case_iia_example(n).unwrap();
            assert!(check_membership(&c, &t).is_member);
            assert_eq!(numerical_rank(c.matrix(), &t).unwrap(), 2);
            // principal submatrix on rows/cols n.. has rank 1
            let dim = n * n - n;
            let sub = ComplexMatrix::from_fn(dim, dim, |i, j| c.matrix().get(n + i, n + j));
            assert_eq!(numerical_rank(&sub, &t).unwrap(), 1);
        }
        assert!(case_iia_example(2).is_err());
    }

    #[test]
    fn embed_rank1_structure() {
        let t = tol();
        let c = embed_rank1_example(3).unwrap();
        assert!(check_membership(&c, &t).is_member);
        assert_eq!(numerical_rank(c.matrix(), &t).unwrap(), 2);
        // zero rows force e_2..e_n and e_{kn+1} into the kernel; e_1 is not
        // in the kernel because the leading entry is 1
        let n = 3;
        for idx in [1usize, 2, 3, 6] {
            let mut v = vec![c_re(0.0); n * n];
            v[idx] = c_re(1.0);
            let img = c.matrix().apply(&v);
            let norm: f64 = img.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(norm < 1e-12, "e_{idx} should be annihilated");
        }
        let mut e0 = vec![c_re(0.0); n * n];
        e0[0] = c_re(1.0);
        let img = c.matrix().apply(&e0);
        let norm: f64 = img.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(embed_rank1_example(2).is_err());
    }

    #[test]
    fn rank2_family_witnesses() {
        let t = tol();
        let diag_corner = rank2_family_n2(
            &Rank2FamilyN2Params {
                c: 1.0,
                s: c_re(0.0),
                y: c_re(0.0),
            },
            &t,
        )
        .unwrap();
        assert!(check_membership(&diag_corner, &t).is_member);
        assert_eq!(numerical_rank(diag_corner.matrix(), &t).unwrap(), 2);

        // on the determinantal stratum: (1-c)(c-|y|^2) = |s|^2
        let stratum = rank2_family_n2(
            &Rank2FamilyN2Params {
                c: 0.5,
                s: c_re(0.5),
                y: c_re(0.0),
            },
            &t,
        )
        .unwrap();
        assert_eq!(numerical_rank(stratum.matrix(), &t).unwrap(), 2);

        let corner = rank2_family_n2(
            &Rank2FamilyN2Params {
                c: 0.0,
                s: c_re(0.0),
                y: c_re(0.0),
            },
            &t,
        )
        .unwrap();
        assert_eq!(numerical_rank(corner.matrix(), &t).unwrap(), 2);

        // |s| too large for PSD
        assert!(matches!(
            rank2_family_n2(
                &Rank2FamilyN2Params {
                    c: 0.5,
                    s: c_re(0.9),
                    y: c_re(0.0),
                },
                &t,
            ),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn random_member_rank_and_determinism() {
        let t = tol();
        for (n, r) in [(2usize, 1usize), (2, 3), (2, 4), (3, 2), (3, 8), (3, 9)] {
            let c = random_member(n, r, 42, &t).unwrap();
            assert!(check_membership(&c, &t).is_member, "n={n} r={r}");
            assert_eq!(numerical_rank(c.matrix(), &t).unwrap(), r, "n={n} r={r}");
            let again = random_member(n, r, 42, &t).unwrap();
            assert_eq!(c.matrix().row_major(), again.matrix().row_major());
            let other = random_member(n, r, 43, &t).unwrap();
            assert!((c.matrix() - other.matrix()).max_abs() > 1e-6);
        }
        assert!(random_member(2, 0, 1, &t).is_err());
        assert!(random_member(2, 5, 1, &t).is_err());
    }

    #[test]
    fn random_unitary_is_unitary_and_seeded() {
        let u = random_unitary(4, 9);
        assert!(u.isometry_residual() < 1e-12);
        let v = random_unitary(4, 9);
        assert_eq!(u.row_major(), v.row_major());
    }

    #[test]
    fn catalog_covers_all_names() {
        let t = tol();
        let params = CatalogParams::default();
        for name in CATALOG_NAMES {
            let entry = catalog_entry(name, &params, &t).unwrap();
            if let CatalogEntry::Choi(c) = entry {
                // constructions are exact up to representation of surds
                let report = check_membership(&c, &t);
                assert!(report.is_member, "catalog entry {name} must be a member");
                assert!(report.hermitian_residual <= 1e-10, "{name}");
                assert!(report.min_eigenvalue >= -1e-10, "{name}");
                assert!(report.max_trace_condition_residual <= 1e-10, "{name}");
            }
        }
        assert!(matches!(
            catalog_entry("nope", &params, &t),
            Err(Error::UnknownExample { .. })
        ));
    }
}
