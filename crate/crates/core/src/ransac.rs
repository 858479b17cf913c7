//! RANSAC around the minimal solvers.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PoseError, Result};
use crate::geometry::{line_residual, point_residual, LineCorrespondence, PointCorrespondence, Pose};
use crate::scalar::Real;
use crate::solution::{Problem, Solutions};
use crate::synthetic::FOCAL_EQUIV;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RansacConfig {
    pub max_iters: usize,
    pub min_iters: usize,
    pub success_prob: f64,
    /// Inlier threshold in pixels of the virtual camera (see [`FOCAL_EQUIV`]).
    pub inlier_threshold_px: f64,
    pub seed: u64,
    pub solver: Problem,
}

impl Default for RansacConfig {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            min_iters: 1000,
            success_prob: 0.9999,
            inlier_threshold_px: 1.0,
            seed: 0,
            solver: Problem::P2P1L,
        }
    }
}

impl RansacConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_iters > self.max_iters {
            return Err(PoseError::ContractViolation("min_iters exceeds max_iters"));
        }
        if !(self.success_prob > 0.0 && self.success_prob < 1.0) {
            return Err(PoseError::ContractViolation("success probability must lie in (0, 1)"));
        }
        if !(self.inlier_threshold_px > 0.0) {
            return Err(PoseError::ContractViolation("inlier threshold must be positive"));
        }
        Ok(())
    }

    /// Iterations needed to draw an all-inlier minimal sample with
    /// probability `success_prob` at inlier ratio `w`, at least `min_iters`.
    pub fn required_iterations(&self, w: f64) -> usize {
        let all_inliers = w.clamp(0.0, 1.0).powi(MINIMAL_SAMPLE_SIZE as i32);
        let needed = if all_inliers >= 1.0 {
            0.0
        } else if all_inliers <= 0.0 {
            f64::INFINITY
        } else {
            ((1.0 - self.success_prob).ln() / (1.0 - all_inliers).ln()).ceil()
        };
        let needed = if needed.is_finite() { needed.min(usize::MAX as f64) as usize } else { usize::MAX };
        needed.max(self.min_iters)
    }
}

/// Features per minimal sample for both problems.
pub const MINIMAL_SAMPLE_SIZE: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RansacResult<T> {
    pub best_pose: Pose<T>,
    pub point_inliers: Vec<bool>,
    pub line_inliers: Vec<bool>,
    pub iterations_run: usize,
    /// Number of inliers of `best_pose`.
    pub score: usize,
}

/// Inlier masks, count and summed inlier residual of a pose.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelScore<T> {
    pub point_inliers: Vec<bool>,
    pub line_inliers: Vec<bool>,
    pub score: usize,
    pub residual_sum: T,
}

fn threshold_radians<T: Real>(threshold_px: f64) -> T {
    T::lit(threshold_px / FOCAL_EQUIV)
}

/// Flags every correspondence whose residual at `pose` is at most
/// `threshold_px / FOCAL_EQUIV`. Correspondences with an undefined residual
/// are outliers.
pub fn score_model<T: Real>(
    pose: &Pose<T>,
    points: &[PointCorrespondence<T>],
    lines: &[LineCorrespondence<T>],
    threshold_px: f64,
) -> ModelScore<T> {
    let tau = threshold_radians::<T>(threshold_px);
    let mut sum = T::zero();
    let mut keep = |r: Result<T>| match r {
        Ok(r) if r <= tau => {
            sum = sum + r;
            true
        }
        _ => false,
    };
    let point_inliers: Vec<bool> = points.iter().map(|pc| keep(point_residual(pose, pc))).collect();
    let line_inliers: Vec<bool> = lines.iter().map(|lc| keep(line_residual(pose, lc))).collect();
    let score = point_inliers.iter().chain(&line_inliers).filter(|&&f| f).count();
    ModelScore { point_inliers, line_inliers, score, residual_sum: sum }
}

/// Allocation-free count and residual sum, for the hypothesis loop.
fn quick_score<T: Real>(
    pose: &Pose<T>,
    points: &[PointCorrespondence<T>],
    lines: &[LineCorrespondence<T>],
    tau: T,
) -> (usize, T) {
    let mut count = 0;
    let mut sum = T::zero();
    let residuals =
        points.iter().map(|pc| point_residual(pose, pc)).chain(lines.iter().map(|lc| line_residual(pose, lc)));
    for r in residuals.flatten() {
        if r <= tau {
            count += 1;
            sum = sum + r;
        }
    }
    (count, sum)
}

fn solve_sample<T: Real>(
    problem: Problem,
    points: &[PointCorrespondence<T>],
    lines: &[LineCorrespondence<T>],
    rng: &mut ChaCha8Rng,
) -> Result<Solutions<T>> {
    let (np, nl) = problem.minimal_counts();
    let pi = sample(rng, points.len(), np);
    let li = sample(rng, lines.len(), nl);
    match problem {
        Problem::P2P1L => crate::p2p1l::solve_p2p1l(&points[pi.index(0)], &points[pi.index(1)], &lines[li.index(0)]),
        Problem::P1P2L => crate::p1p2l::solve_p1p2l(&points[pi.index(0)], &lines[li.index(0)], &lines[li.index(1)]),
    }
}

/// Estimates a pose from correspondences contaminated by outliers.
///
/// Each iteration solves a uniformly drawn minimal sample and scores all of
/// its poses. The best model has the most inliers, ties going to the smaller
/// summed inlier residual. Sampling stops once the adaptive bound for the
/// current best inlier ratio is met (never before `min_iters`), or at
/// `max_iters`.
pub fn run_ransac<T: Real>(
    points: &[PointCorrespondence<T>],
    lines: &[LineCorrespondence<T>],
    cfg: &RansacConfig,
) -> Result<RansacResult<T>> {
    cfg.validate()?;
    let (np, nl) = cfg.solver.minimal_counts();
    if points.len() < np || lines.len() < nl {
        return Err(PoseError::InsufficientData("not enough correspondences for a minimal sample"));
    }
    let total = (points.len() + lines.len()) as f64;
    let tau = threshold_radians::<T>(cfg.inlier_threshold_px);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(Pose<T>, usize, T)> = None;
    let mut needed = cfg.required_iterations(0.0).min(cfg.max_iters);
    let mut iterations = 0;

    while iterations < needed {
        iterations += 1;
        let Ok(sols) = solve_sample(cfg.solver, points, lines, &mut rng) else {
            continue;
        };
        for pose in &sols.poses {
            let (count, sum) = quick_score(pose, points, lines, tau);
            let better = match &best {
                None => true,
                Some((_, c, s)) => count > *c || (count == *c && sum < *s),
            };
            if better {
                best = Some((*pose, count, sum));
                needed = cfg.required_iterations(count as f64 / total).min(cfg.max_iters);
            }
        }
    }

    let (pose, _, _) = best.ok_or(PoseError::NoModel)?;
    let s = score_model(&pose, points, lines, cfg.inlier_threshold_px);
    Ok(RansacResult {
        best_pose: pose,
        point_inliers: s.point_inliers,
        line_inliers: s.line_inliers,
        iterations_run: iterations,
        score: s.score,
    })
}
