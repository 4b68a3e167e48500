//! Convex geometry of quantum channels through their Choi matrices.
//!
//! A quantum channel on n×n matrices is a completely positive
//! trace-preserving map; its Choi matrix is the n²×n² block matrix of the
//! images of the matrix units, and the channels correspond exactly to the
//! PSD matrices whose block traces are the identity pattern. This crate
//! computes the convex structure of that set: membership diagnostics,
//! conversions between Kraus and Choi representations, the dimension of
//! the face generated by a member, extremality by two independent
//! criteria, boundary walks, and decomposition into at most n² extreme
//! points.

// index loops mirror the matrix coordinate conventions throughout
#![allow(clippy::needless_range_loop)]

pub mod census;
pub mod channel;
pub mod constructions;
pub mod decompose;
pub mod eigen;
pub mod error;
pub mod face;
pub mod matrix;

pub use census::{face_dimension_census, face_dimension_census_seq, sample_seed};
pub use channel::{
    block_trace, check_membership, choi_from_kraus, conjugate_blocks, kraus_from_choi,
    rank1_membership, require_member, ChoiMatrix, KrausSet, MembershipReport,
};
pub use decompose::{decompose, find_extreme_in_face, Decomposition};
pub use eigen::{hermitian_eigen, kernel_basis, numerical_rank, range_isometry, HermitianEigen};
pub use error::{Error, Result};
pub use face::{
    boundary_step, choi_criterion_extreme, extend_face, face_dimension, face_direction_basis,
    face_report, is_extreme, FaceReport, TraceConstraintMap,
};
pub use matrix::{Complex64, ComplexMatrix, Tolerances};
