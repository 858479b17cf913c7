//! Solver output shared by the minimal solvers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{line_residual, point_residual, LineCorrespondence, PointCorrespondence, Pose};
use crate::scalar::Real;

/// Which solver variant produced a set of poses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverVariant {
    P2P1LGeneric,
    P2P1LCoplanar,
    P1P2LStabilized,
    P1P2LUnstabilized,
}

impl SolverVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverVariant::P2P1LGeneric => "p2p1l_generic",
            SolverVariant::P2P1LCoplanar => "p2p1l_coplanar",
            SolverVariant::P1P2LStabilized => "p1p2l_stabilized",
            SolverVariant::P1P2LUnstabilized => "p1p2l_unstabilized",
        }
    }
}

impl fmt::Display for SolverVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Poses returned by a dispatching solver, tagged with the variant used.
#[derive(Debug, Clone, PartialEq)]
pub struct Solutions<T> {
    pub variant: SolverVariant,
    pub poses: Vec<Pose<T>>,
}

impl<T> Solutions<T> {
    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }
}

/// Residuals above this on the minimal data itself discard a candidate pose.
pub(crate) fn filter_threshold<T: Real>() -> T {
    T::lit(1e-4).max(T::epsilon().sqrt())
}

/// Largest residual of `pose` over a minimal sample.
pub(crate) fn max_residual<T: Real>(
    pose: &Pose<T>,
    points: &[&PointCorrespondence<T>],
    lines: &[&LineCorrespondence<T>],
) -> Result<T> {
    let mut worst = T::zero();
    for pc in points {
        worst = worst.max(point_residual(pose, pc)?);
    }
    for lc in lines {
        worst = worst.max(line_residual(pose, lc)?);
    }
    Ok(worst)
}

/// Keeps `pose` if it is finite and explains the minimal sample.
pub(crate) fn accept<T: Real>(
    pose: &Pose<T>,
    points: &[&PointCorrespondence<T>],
    lines: &[&LineCorrespondence<T>],
) -> bool {
    pose.is_finite() && matches!(max_residual(pose, points, lines), Ok(r) if r <= filter_threshold())
}

/// The two minimal problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    P2P1L,
    P1P2L,
}

impl Problem {
    /// Number of `(points, lines)` in a minimal sample.
    pub fn minimal_counts(self) -> (usize, usize) {
        match self {
            Problem::P2P1L => (2, 1),
            Problem::P1P2L => (1, 2),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::P2P1L => "p2p1l",
            Problem::P1P2L => "p1p2l",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Runs the dispatching solver for `problem` on the first correspondences
/// of each kind.
pub fn solve_minimal<T: Real>(
    problem: Problem,
    points: &[PointCorrespondence<T>],
    lines: &[LineCorrespondence<T>],
) -> Result<Solutions<T>> {
    let (np, nl) = problem.minimal_counts();
    if points.len() < np || lines.len() < nl {
        return Err(crate::error::PoseError::InsufficientData("not enough correspondences for a minimal sample"));
    }
    match problem {
        Problem::P2P1L => crate::p2p1l::solve_p2p1l(&points[0], &points[1], &lines[0]),
        Problem::P1P2L => crate::p1p2l::solve_p1p2l(&points[0], &lines[0], &lines[1]),
    }
}
