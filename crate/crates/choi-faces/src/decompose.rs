//! Decomposition of members of C_n into convex combinations of at most n²
//! extreme points, by repeated descent to the relative boundary of the
//! generated face.

use crate::channel::{require_member, ChoiMatrix};
use crate::error::{Error, Result};
use crate::face::{boundary_step, face_direction_basis, TraceConstraintMap};
use crate::matrix::{ComplexMatrix, Tolerances};

/// Convex combination of extreme points reproducing a member.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Positive weights summing to one.
    pub weights: Vec<f64>,
    /// Extreme members of C_n, one per weight.
    pub points: Vec<ChoiMatrix>,
    /// Max-norm reconstruction error of the weighted sum.
    pub residual: f64,
}

impl Decomposition {
    /// The weighted sum of the points.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.points[0].dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (w, p) in self.weights.iter().zip(self.points.iter()) {
            sum = &sum + &p.matrix().scale_re(*w);
        }
        sum
    }
}

/// Descends inside the face generated by `c` to one of its extreme points,
/// following the first tangent direction at each step. The rank drops at
/// every boundary crossing, so the walk ends after at most `rank(c)` steps.
pub fn find_extreme_in_face(c: &ChoiMatrix, tol: &Tolerances) -> Result<ChoiMatrix> {
    require_member(c, tol)?;
    let mut current = c.clone();
    let mut rank = TraceConstraintMap::build(&current, tol)?.r();
    loop {
        let directions = face_direction_basis(&current, tol)?;
        match directions.first() {
            None => return Ok(current),
            Some(direction) => {
                let (_, boundary) = boundary_step(&current, direction, tol)?;
                let new_rank = TraceConstraintMap::build(&boundary, tol)?.r();
                if new_rank >= rank {
                    return Err(Error::IterationOverflow);
                }
                rank = new_rank;
                current = boundary;
            }
        }
    }
}

/// Writes a member as a convex combination of at most n² extreme points.
///
/// Each round finds an extreme point `E` of the current face, extends the
/// segment from `E` through the current point to the far boundary, splits
/// the point between `E` and the boundary, and recurses on the boundary
/// point, whose rank is strictly smaller.
pub fn decompose(c: &ChoiMatrix, tol: &Tolerances) -> Result<Decomposition> {
    require_member(c, tol)?;
    let max_points = c.n() * c.n();
    let mut weights = Vec::new();
    let mut points = Vec::new();
    let mut scale = 1.0f64;
    let mut current = c.clone();
    loop {
        if points.len() > max_points {
            return Err(Error::DecompositionOverflow);
        }
        let extreme = find_extreme_in_face(&current, tol)?;
        if (current.matrix() - extreme.matrix()).max_abs() <= tol.equality_abs {
            weights.push(scale);
            points.push(extreme);
            break;
        }
        // direction away from the extreme point is block-traceless and
        // range-compatible automatically; boundary_step re-checks both
        let away = current.matrix() - extreme.matrix();
        let (s, far_boundary) = boundary_step(&current, &away, tol)?;
        weights.push(scale * s / (1.0 + s));
        points.push(extreme);
        scale /= 1.0 + s;
        current = far_boundary;
    }
    if points.len() > max_points {
        return Err(Error::DecompositionOverflow);
    }
    let mut decomposition = Decomposition {
        weights,
        points,
        residual: 0.0,
    };
    decomposition.residual = (&decomposition.reconstruct() - c.matrix()).max_abs();
    Ok(decomposition)
}
