//! On-disk document formats: channels as JSON with complex entries encoded
//! as `[re, im]` pairs.

use choi_faces::{
    choi_from_kraus, ChoiMatrix, Complex64, ComplexMatrix, Decomposition, KrausSet,
};
use serde::{Deserialize, Serialize};

pub type EncodedMatrix = Vec<Vec<[f64; 2]>>;

/// A parsed channel document.
///
/// `choi` carries an n²×n² matrix, `kraus` a sequence of n×n operators.
/// `matrix` is a bare square matrix used for fixtures that are not channels
/// (the catalog's `p` entry); it analyzes as a Choi matrix only when its
/// dimension is a perfect square.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelFile {
    Choi { n: usize, data: EncodedMatrix },
    Kraus { n: usize, data: Vec<EncodedMatrix> },
    Matrix { data: EncodedMatrix },
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionTerm {
    pub weight: f64,
    pub point: ChannelFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionFile {
    pub n: usize,
    pub residual: f64,
    pub terms: Vec<DecompositionTerm>,
}

pub fn encode_matrix(m: &ComplexMatrix) -> EncodedMatrix {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

pub fn decode_matrix(data: &EncodedMatrix) -> Result<ComplexMatrix, String> {
    let rows = data.len();
    if rows == 0 {
        return Err("matrix has no rows".into());
    }
    let cols = data[0].len();
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            ));
        }
        for &[re, im] in row {
            entries.push(Complex64::new(re, im));
        }
    }
    ComplexMatrix::new(rows, cols, entries).map_err(|e| e.to_string())
}

pub fn choi_to_file(c: &ChoiMatrix) -> ChannelFile {
    ChannelFile::Choi {
        n: c.n(),
        data: encode_matrix(c.matrix()),
    }
}

/// Interprets a parsed document as a Choi matrix.
///
/// Returns `Ok(Err(matrix))` for a bare square matrix whose dimension is
/// not a perfect square: such inputs can still be diagnosed spectrally but
/// are never channel members.
pub fn to_choi(file: &ChannelFile) -> Result<Result<ChoiMatrix, ComplexMatrix>, String> {
    match file {
        ChannelFile::Choi { n, data } => {
            let m = decode_matrix(data)?;
            ChoiMatrix::new(*n, m).map(Ok).map_err(|e| e.to_string())
        }
        ChannelFile::Kraus { n, data } => {
            let ops = data
                .iter()
                .map(|d| {
                    let m = decode_matrix(d)?;
                    if m.rows() != *n || m.cols() != *n {
                        return Err(format!(
                            "kraus operator is {}x{}, expected {n}x{n}",
                            m.rows(),
                            m.cols()
                        ));
                    }
                    Ok(m)
                })
                .collect::<Result<Vec<_>, String>>()?;
            let set = KrausSet::new(ops).map_err(|e| e.to_string())?;
            Ok(Ok(choi_from_kraus(&set)))
        }
        ChannelFile::Matrix { data } => {
            let m = decode_matrix(data)?;
            if !m.is_square() {
                return Err(format!("matrix is {}x{}, expected square", m.rows(), m.cols()));
            }
            let dim = m.rows();
            let n = (dim as f64).sqrt().round() as usize;
            if n * n == dim {
                ChoiMatrix::new(n, m).map(Ok).map_err(|e| e.to_string())
            } else {
                Ok(Err(m))
            }
        }
    }
}

pub fn decomposition_to_file(n: usize, d: &Decomposition) -> DecompositionFile {
    DecompositionFile {
        n,
        residual: d.residual,
        terms: d
            .weights
            .iter()
            .zip(d.points.iter())
            .map(|(w, p)| DecompositionTerm {
                weight: *w,
                point: choi_to_file(p),
            })
            .collect(),
    }
}
