//! Per-sample evaluation protocol shared by the benchmark tools.
//!
//! Sample `i` of a batch seeded with `seed` draws from its own ChaCha stream,
//! so a batch can be split across threads in any way without changing a
//! single instance.

use std::hint::black_box;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PoseError, Result};
use crate::frames::build_p2p1l_frame;
use crate::geometry::{LineCorrespondence, PointCorrespondence, Pose};
use crate::metrics::{best_solution_error, rotation_error, translation_error, ErrorBatch};
use crate::p1p2l::{is_coplanar, solve_p1p2l, solve_p1p2l_with_variant};
use crate::p2p1l::{is_coplanar_frame, solve_p2p1l, solve_p2p1l_coplanar, solve_p2p1l_generic};
use crate::ransac::RansacResult;
use crate::scalar::Real;
use crate::solution::{Problem, Solutions, SolverVariant};
use crate::synthetic::{inject_outliers, sample_instance, SyntheticInstance};

/// Random source for sample `index` of a batch.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The minimal instance used as sample `index`.
pub fn batch_instance(
    problem: Problem,
    coplanar: bool,
    noise_px: f64,
    seed: u64,
    index: u64,
) -> Result<SyntheticInstance> {
    sample_instance(problem, coplanar, noise_px, &mut instance_rng(seed, index))
}

pub fn variant_problem(variant: SolverVariant) -> Problem {
    match variant {
        SolverVariant::P2P1LGeneric | SolverVariant::P2P1LCoplanar => Problem::P2P1L,
        SolverVariant::P1P2LStabilized | SolverVariant::P1P2LUnstabilized => Problem::P1P2L,
    }
}

/// Variant the dispatching solver picks for `inst`.
pub fn dispatch_variant(inst: &SyntheticInstance) -> SolverVariant {
    match inst.problem {
        Problem::P2P1L => match build_p2p1l_frame(&inst.points[0], &inst.points[1], &inst.lines[0]) {
            Ok(f) if is_coplanar_frame(&f) => SolverVariant::P2P1LCoplanar,
            _ => SolverVariant::P2P1LGeneric,
        },
        Problem::P1P2L => {
            if is_coplanar(&inst.points[0], &inst.lines[0], &inst.lines[1]) {
                SolverVariant::P1P2LUnstabilized
            } else {
                SolverVariant::P1P2LStabilized
            }
        }
    }
}

/// Solves the minimal instance in scalar type `T`, either dispatching or
/// with a forced variant.
pub fn solve_instance<T: Real>(inst: &SyntheticInstance, variant: Option<SolverVariant>) -> Result<Solutions<T>> {
    let pts: Vec<_> = inst.points.iter().map(|p| p.cast::<T>()).collect();
    let lns: Vec<_> = inst.lines.iter().map(|l| l.cast::<T>()).collect();
    let (np, nl) = inst.problem.minimal_counts();
    if pts.len() < np || lns.len() < nl {
        return Err(PoseError::InsufficientData("instance smaller than a minimal sample"));
    }
    let Some(variant) = variant else {
        return match inst.problem {
            Problem::P2P1L => solve_p2p1l(&pts[0], &pts[1], &lns[0]),
            Problem::P1P2L => solve_p1p2l(&pts[0], &lns[0], &lns[1]),
        };
    };
    if variant_problem(variant) != inst.problem {
        return Err(PoseError::ContractViolation("variant does not match the problem"));
    }
    let poses = match variant {
        SolverVariant::P2P1LGeneric => solve_p2p1l_generic(&pts[0], &pts[1], &lns[0])?,
        SolverVariant::P2P1LCoplanar => solve_p2p1l_coplanar(&pts[0], &pts[1], &lns[0])?,
        v => solve_p1p2l_with_variant(&pts[0], &lns[0], &lns[1], v)?,
    };
    Ok(Solutions { variant, poses })
}

/// Result of solving one sample of a batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleOutcome {
    pub variant: SolverVariant,
    pub rotation_error: f64,
    pub translation_error: f64,
    pub solutions: usize,
    /// No pose was returned (solver error or empty output).
    pub failed: bool,
}

/// Generates and solves sample `index`, measuring against ground truth.
pub fn evaluate_sample<T: Real>(
    problem: Problem,
    coplanar: bool,
    seed: u64,
    index: u64,
    variant: Option<SolverVariant>,
) -> Result<SampleOutcome> {
    let inst = batch_instance(problem, coplanar, 0.0, seed, index)?;
    Ok(match solve_instance::<T>(&inst, variant) {
        Ok(sol) => {
            let poses: Vec<Pose<f64>> = sol.poses.iter().map(|p| p.cast()).collect();
            let (r, t) = best_solution_error(&poses, &inst.ground_truth);
            SampleOutcome {
                variant: sol.variant,
                rotation_error: r,
                translation_error: t,
                solutions: poses.len(),
                failed: poses.is_empty(),
            }
        }
        Err(_) => SampleOutcome {
            variant: variant.unwrap_or_else(|| dispatch_variant(&inst)),
            rotation_error: std::f64::consts::PI,
            translation_error: f64::INFINITY,
            solutions: 0,
            failed: true,
        },
    })
}

/// Groups outcomes by variant, in order of first appearance.
pub fn group_by_variant(outcomes: &[SampleOutcome]) -> Vec<(SolverVariant, ErrorBatch)> {
    let mut groups: Vec<(SolverVariant, ErrorBatch)> = Vec::new();
    for o in outcomes {
        let idx = match groups.iter().position(|(v, _)| *v == o.variant) {
            Some(i) => i,
            None => {
                groups.push((o.variant, ErrorBatch::default()));
                groups.len() - 1
            }
        };
        let batch = &mut groups[idx].1;
        batch.rotation.push(o.rotation_error);
        batch.translation.push(o.translation_error);
        batch.failures += usize::from(o.failed);
    }
    groups
}

/// Simulated robust-estimation scene: a generic minimal instance grown to
/// `n_total` correspondences with the given outlier ratio, all drawn from
/// one ChaCha stream seeded with `seed`.
pub fn ransac_scene(
    problem: Problem,
    n_total: usize,
    outlier_ratio: f64,
    noise_px: f64,
    seed: u64,
) -> Result<SyntheticInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = sample_instance(problem, false, noise_px, &mut rng)?;
    inject_outliers(&base, n_total, outlier_ratio, &mut rng)
}

/// How well a robust estimate matches a labelled scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RansacAssessment {
    pub rotation_error: f64,
    pub translation_error: f64,
    /// Fraction of true inliers flagged as inliers.
    pub inlier_recall: f64,
    /// Fraction of flagged inliers that are true inliers.
    pub inlier_precision: f64,
}

pub fn assess_ransac(inst: &SyntheticInstance, res: &RansacResult<f64>) -> RansacAssessment {
    let flags = res.point_inliers.iter().chain(&res.line_inliers);
    let labels = inst.point_labels.iter().chain(&inst.line_labels);
    let (mut hits, mut flagged, mut truth) = (0usize, 0usize, 0usize);
    for (&f, &l) in flags.zip(labels) {
        hits += usize::from(f && l);
        flagged += usize::from(f);
        truth += usize::from(l);
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let gt = &inst.ground_truth;
    RansacAssessment {
        rotation_error: rotation_error(&res.best_pose.rotation, &gt.rotation),
        translation_error: translation_error(&res.best_pose.translation, &gt.translation).unwrap_or(f64::INFINITY),
        inlier_recall: ratio(hits, truth),
        inlier_precision: ratio(hits, flagged),
    }
}

/// Minimal correspondences of an instance, cast to `T` ahead of timing.
#[derive(Debug, Clone)]
pub struct TimedInput<T> {
    pub problem: Problem,
    pub points: Vec<PointCorrespondence<T>>,
    pub lines: Vec<LineCorrespondence<T>>,
}

impl<T: Real> TimedInput<T> {
    pub fn from_instance(inst: &SyntheticInstance) -> Self {
        Self {
            problem: inst.problem,
            points: inst.points.iter().map(|p| p.cast()).collect(),
            lines: inst.lines.iter().map(|l| l.cast()).collect(),
        }
    }

    /// One full dispatching solve: framing, root finding and unframing.
    #[inline]
    pub fn solve(&self) -> Result<Solutions<T>> {
        match self.problem {
            Problem::P2P1L => solve_p2p1l(&self.points[0], &self.points[1], &self.lines[0]),
            Problem::P1P2L => solve_p1p2l(&self.points[0], &self.lines[0], &self.lines[1]),
        }
    }
}

/// Runs `warmup` untimed solves cycling through `inputs`, then times one
/// solve per input. Returns wall time per call in nanoseconds.
pub fn time_solves<T: Real>(inputs: &[TimedInput<T>], warmup: usize) -> Vec<f64> {
    if inputs.is_empty() {
        return Vec::new();
    }
    for input in inputs.iter().cycle().take(warmup) {
        let _ = black_box(black_box(input).solve());
    }
    inputs
        .iter()
        .map(|input| {
            let input = black_box(input);
            let start = Instant::now();
            let out = input.solve();
            let elapsed = start.elapsed();
            let _ = black_box(out);
            elapsed.as_nanos() as f64
        })
        .collect()
}
