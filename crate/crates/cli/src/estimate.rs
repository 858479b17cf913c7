//! Commands working on correspondence sets: robust estimation, direct
//! minimal solves and file generation.

use std::path::Path;

use minpose::experiment::{assess_ransac, ransac_scene};
use minpose::geometry::{line_residual, point_residual};
use minpose::io::{format_correspondences, parse_correspondences, CorrespondenceSet};
use minpose::metrics::{best_solution_error, rotation_error, translation_error};
use minpose::synthetic::{inject_outliers, sample_instance};
use minpose::{run_ransac, solve_minimal, Pose64, Problem, RansacConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{GenerateArgs, RansacArgs, SolveArgs};
use crate::error::{CliError, CliResult};

fn read_set(path: &Path) -> CliResult<CorrespondenceSet> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_correspondences(&text)?)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output values serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct PoseJson {
    /// Row-major.
    rotation: [f64; 9],
    translation: [f64; 3],
}

impl From<&Pose64> for PoseJson {
    fn from(p: &Pose64) -> Self {
        let r = p.rotation;
        let mut rotation = [0.0; 9];
        for (i, v) in rotation.iter_mut().enumerate() {
            *v = r[(i / 3, i % 3)];
        }
        Self { rotation, translation: p.translation.to_array() }
    }
}

#[derive(Serialize)]
struct GroundTruthErrors {
    rotation_error_rad: f64,
    rotation_error_deg: f64,
    translation_error: Option<f64>,
}

impl GroundTruthErrors {
    fn new(est: &Pose64, gt: &Pose64) -> Self {
        let r = rotation_error(&est.rotation, &gt.rotation);
        Self {
            rotation_error_rad: r,
            rotation_error_deg: r.to_degrees(),
            translation_error: translation_error(&est.translation, &gt.translation).ok(),
        }
    }
}

#[derive(Serialize)]
struct RansacJson {
    solver: String,
    correspondences: usize,
    pose: PoseJson,
    inliers: usize,
    point_inliers: usize,
    line_inliers: usize,
    iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    ground_truth: Option<GroundTruthErrors>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inlier_recall: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inlier_precision: Option<f64>,
}

pub fn ransac(args: &RansacArgs) -> CliResult<String> {
    let cfg = RansacConfig {
        max_iters: args.max_iters,
        min_iters: args.min_iters,
        success_prob: args.success_prob,
        inlier_threshold_px: args.threshold,
        seed: args.seed,
        solver: Problem::from(args.solver),
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let (set, scene) = match &args.file {
        Some(path) => (read_set(path)?, None),
        None => {
            let inst = ransac_scene(cfg.solver, args.n_total, args.outlier_ratio, args.noise, args.seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let set = CorrespondenceSet {
                points: inst.points.clone(),
                lines: inst.lines.clone(),
                ground_truth: Some(inst.ground_truth),
            };
            (set, Some(inst))
        }
    };
    let res = run_ransac(&set.points, &set.lines, &cfg)?;
    let assessment = scene.as_ref().map(|inst| assess_ransac(inst, &res));
    let count = |flags: &[bool]| flags.iter().filter(|&&f| f).count();
    let out = RansacJson {
        solver: cfg.solver.to_string(),
        correspondences: set.points.len() + set.lines.len(),
        pose: PoseJson::from(&res.best_pose),
        inliers: res.score,
        point_inliers: count(&res.point_inliers),
        line_inliers: count(&res.line_inliers),
        iterations: res.iterations_run,
        ground_truth: set.ground_truth.as_ref().map(|gt| GroundTruthErrors::new(&res.best_pose, gt)),
        inlier_recall: assessment.map(|a| a.inlier_recall),
        inlier_precision: assessment.map(|a| a.inlier_precision),
    };
    Ok(json(&out))
}

#[derive(Serialize)]
struct SolvedPose {
    #[serde(flatten)]
    pose: PoseJson,
    point_residuals: Vec<Option<f64>>,
    line_residuals: Vec<Option<f64>>,
}

#[derive(Serialize)]
struct SolveJson {
    problem: String,
    variant: String,
    poses: Vec<SolvedPose>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ground_truth: Option<GroundTruthErrors>,
}

pub fn solve(args: &SolveArgs) -> CliResult<String> {
    let problem = Problem::from(args.problem);
    let set = read_set(&args.file)?;
    let (np, nl) = problem.minimal_counts();
    if (set.points.len(), set.lines.len()) != (np, nl) {
        return Err(CliError::Usage(format!(
            "{problem} needs exactly {np} point(s) and {nl} line(s), the file has {} and {}",
            set.points.len(),
            set.lines.len()
        )));
    }
    let sols = solve_minimal(problem, &set.points, &set.lines)?;
    if sols.is_empty() {
        return Err(CliError::NoSolution);
    }
    let poses = sols
        .poses
        .iter()
        .map(|p| SolvedPose {
            pose: PoseJson::from(p),
            point_residuals: set.points.iter().map(|pc| point_residual(p, pc).ok()).collect(),
            line_residuals: set.lines.iter().map(|lc| line_residual(p, lc).ok()).collect(),
        })
        .collect();
    let ground_truth = set.ground_truth.map(|gt| {
        let (r, t) = best_solution_error(&sols.poses, &gt);
        GroundTruthErrors { rotation_error_rad: r, rotation_error_deg: r.to_degrees(), translation_error: Some(t) }
    });
    Ok(json(&SolveJson { problem: problem.to_string(), variant: sols.variant.to_string(), poses, ground_truth }))
}

pub fn generate(args: &GenerateArgs) -> CliResult<String> {
    let problem = Problem::from(args.problem);
    if args.noise.is_nan() || args.noise < 0.0 {
        return Err(CliError::Usage("noise must be non-negative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut inst = sample_instance(problem, args.coplanar, args.noise, &mut rng)?;
    if let Some(n) = args.n_total {
        inst = inject_outliers(&inst, n, args.outlier_ratio, &mut rng).map_err(|e| CliError::Usage(e.to_string()))?;
    } else if args.outlier_ratio != 0.0 {
        return Err(CliError::Usage("--outlier-ratio requires --n-total".into()));
    }
    Ok(format_correspondences(&CorrespondenceSet {
        points: inst.points,
        lines: inst.lines,
        ground_truth: Some(inst.ground_truth),
    }))
}
