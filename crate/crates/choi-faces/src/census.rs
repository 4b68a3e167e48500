//! Batch face-dimension surveys over seeded random members.
//!
//! Samples are indexed and each index derives its own seed, so the
//! parallel and sequential paths produce identical histograms.

use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::constructions::random_member;
use crate::error::Result;
use crate::face::face_dimension;
use crate::matrix::Tolerances;

/// Seed for the sample at `index` within a run seeded by `base`.
pub fn sample_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn sample_dim(n: usize, rank: usize, base: u64, index: usize, tol: &Tolerances) -> Result<usize> {
    let member = random_member(n, rank, sample_seed(base, index), tol)?;
    face_dimension(&member, tol)
}

fn tally(dims: Vec<usize>) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for d in dims {
        *hist.entry(d).or_insert(0) += 1;
    }
    hist
}

/// Sequential face-dimension histogram over seeded random members.
pub fn face_dimension_census_seq(
    n: usize,
    rank: usize,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<BTreeMap<usize, usize>> {
    let dims = (0..samples)
        .map(|i| sample_dim(n, rank, seed, i, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(dims))
}

/// Face-dimension histogram over seeded random members; runs across worker
/// threads when the `parallel` feature is enabled, with results merged by
/// sample index so threading never changes the output.
#[cfg(feature = "parallel")]
pub fn face_dimension_census(
    n: usize,
    rank: usize,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<BTreeMap<usize, usize>> {
    let dims = (0..samples)
        .into_par_iter()
        .map(|i| sample_dim(n, rank, seed, i, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(dims))
}

#[cfg(not(feature = "parallel"))]
pub fn face_dimension_census(
    n: usize,
    rank: usize,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<BTreeMap<usize, usize>> {
    face_dimension_census_seq(n, rank, samples, seed, tol)
}
