//! Random problem instances with known ground truth.
//!
//! Poses use a uniformly random axis, a standard-normal angle and a camera
//! center on the unit sphere. World points are drawn from `N((0, 0, 5), I)`;
//! each line is spanned by two such points and observed through two points
//! sampled uniformly on the segment between them.
//!
//! Image noise is expressed in pixels of a virtual camera with focal length
//! [`FOCAL_EQUIV`]: each bearing is displaced in its tangent plane by a
//! Gaussian with per-axis standard deviation `noise_px / FOCAL_EQUIV` radians.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::error::{PoseError, Result};
use crate::geometry::{line_residual, rotation_from_axis_angle, LineCorrespondence, PointCorrespondence, Pose};
use crate::linalg::Vec3;
use crate::solution::Problem;

/// Virtual focal length converting pixels to radians.
pub const FOCAL_EQUIV: f64 = 1000.0;

/// Features closer than this to the camera's image plane force a resample.
pub const MIN_DEPTH: f64 = 1e-6;

/// Maximum number of attempts to draw a valid instance.
pub const MAX_RETRIES: usize = 100;

/// Largest residual a noiseless observation may have at the ground truth.
const EXACTNESS: f64 = 1e-12;

const SCENE_MEAN: Vec3<f64> = Vec3::new(0.0, 0.0, 5.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticInstance {
    pub problem: Problem,
    pub coplanar: bool,
    pub noise_px: f64,
    pub ground_truth: Pose<f64>,
    pub points: Vec<PointCorrespondence<f64>>,
    pub lines: Vec<LineCorrespondence<f64>>,
    /// `true` marks an inlier, one flag per entry of `points`.
    pub point_labels: Vec<bool>,
    /// `true` marks an inlier, one flag per entry of `lines`.
    pub line_labels: Vec<bool>,
}

impl SyntheticInstance {
    pub fn len(&self) -> usize {
        self.points.len() + self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn inlier_count(&self) -> usize {
        self.point_labels.iter().chain(&self.line_labels).filter(|&&l| l).count()
    }
}

fn unit_sphere<R: Rng + ?Sized>(rng: &mut R) -> Vec3<f64> {
    Vec3::from_array(UnitSphere.sample(rng))
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn scene_point<R: Rng + ?Sized>(rng: &mut R) -> Vec3<f64> {
    SCENE_MEAN + Vec3::new(normal(rng), normal(rng), normal(rng))
}

pub fn sample_pose<R: Rng + ?Sized>(rng: &mut R) -> Pose<f64> {
    let axis = unit_sphere(rng);
    let angle = normal(rng);
    let rotation = rotation_from_axis_angle(axis, angle).expect("sampled axis is unit length");
    let center = unit_sphere(rng);
    Pose::new(rotation, -(rotation * center))
}

/// Displaces a unit bearing by isotropic tangent-plane noise of `sigma` radians per axis.
pub fn perturb_bearing<R: Rng + ?Sized>(bearing: Vec3<f64>, sigma: f64, rng: &mut R) -> Vec3<f64> {
    if sigma == 0.0 {
        return bearing;
    }
    let helper = if bearing.x.abs() < 0.9 { Vec3::unit_x() } else { Vec3::unit_y() };
    let e1 = bearing.cross(helper).normalize();
    let e2 = bearing.cross(e1);
    (bearing + e1 * (sigma * normal(rng)) + e2 * (sigma * normal(rng))).normalize()
}

fn in_front(pose: &Pose<f64>, p: Vec3<f64>) -> bool {
    pose.apply(p).z > MIN_DEPTH
}

fn observe_point<R: Rng + ?Sized>(
    pose: &Pose<f64>,
    world: Vec3<f64>,
    sigma: f64,
    rng: &mut R,
) -> Result<PointCorrespondence<f64>> {
    let b = pose.apply(world).normalize();
    PointCorrespondence::new(world, perturb_bearing(b, sigma, rng))
}

fn observe_line<R: Rng + ?Sized>(
    pose: &Pose<f64>,
    a: Vec3<f64>,
    b: Vec3<f64>,
    sigma: f64,
    rng: &mut R,
) -> Result<LineCorrespondence<f64>> {
    let (t1, t2) = (rng.random::<f64>(), rng.random::<f64>());
    let ray = |t: f64| pose.apply(a + (b - a) * t).normalize();
    let (r1, r2) = (ray(t1), ray(t2));
    // Samples too close together leave the image line poorly determined even
    // without noise.
    let clean = LineCorrespondence::new(a, b, r1, r2)?;
    if !(line_residual(pose, &clean)? < EXACTNESS) {
        return Err(PoseError::DegenerateInput("line samples too close to fix the image line"));
    }
    LineCorrespondence::new(a, b, perturb_bearing(r1, sigma, rng), perturb_bearing(r2, sigma, rng))
}

/// Flattens `pts` onto a random plane through their centroid.
fn flatten<R: Rng + ?Sized>(pts: &mut [Vec3<f64>], rng: &mut R) {
    let n = unit_sphere(rng);
    let centroid = pts.iter().fold(Vec3::zeros(), |acc, p| acc + *p) * (pts.len() as f64).recip();
    for p in pts.iter_mut() {
        *p = *p - n * n.dot(*p - centroid);
    }
}

/// Draws a minimal instance for `problem`.
///
/// Samples whose features fall behind (or too close to) the camera are
/// redrawn from scratch, at most [`MAX_RETRIES`] times.
pub fn sample_instance<R: Rng + ?Sized>(
    problem: Problem,
    coplanar: bool,
    noise_px: f64,
    rng: &mut R,
) -> Result<SyntheticInstance> {
    if !(noise_px >= 0.0) || !noise_px.is_finite() {
        return Err(PoseError::ContractViolation("noise must be a finite non-negative number"));
    }
    let sigma = noise_px / FOCAL_EQUIV;
    let (np, nl) = problem.minimal_counts();
    for _ in 0..MAX_RETRIES {
        let pose = sample_pose(rng);
        let mut world: Vec<Vec3<f64>> = (0..np + 2 * nl).map(|_| scene_point(rng)).collect();
        if coplanar {
            flatten(&mut world, rng);
        }
        if !world.iter().all(|&p| in_front(&pose, p)) {
            continue;
        }
        let points: Result<Vec<_>> = world[..np].iter().map(|&p| observe_point(&pose, p, sigma, rng)).collect();
        let lines: Result<Vec<_>> =
            world[np..].chunks(2).map(|ab| observe_line(&pose, ab[0], ab[1], sigma, rng)).collect();
        let (Ok(points), Ok(lines)) = (points, lines) else {
            continue;
        };
        return Ok(SyntheticInstance {
            problem,
            coplanar,
            noise_px,
            ground_truth: pose,
            point_labels: vec![true; points.len()],
            line_labels: vec![true; lines.len()],
            points,
            lines,
        });
    }
    Err(PoseError::DegenerateInput("no valid instance within the retry budget"))
}

fn visible_point<R: Rng + ?Sized>(pose: &Pose<f64>, rng: &mut R) -> Result<Vec3<f64>> {
    for _ in 0..MAX_RETRIES {
        let p = scene_point(rng);
        if in_front(pose, p) {
            return Ok(p);
        }
    }
    Err(PoseError::DegenerateInput("no visible scene point within the retry budget"))
}

fn split_half(n: usize) -> (usize, usize) {
    (n - n / 2, n / 2)
}

/// Grows `instance` to `n_total` correspondences, of which
/// `round(n_total * outlier_ratio)` are outliers.
///
/// Extra inliers are fresh features observed through the ground-truth pose
/// with the instance's noise level; outliers pair fresh world features with
/// the (noise-free) projections of unrelated scene points. Both kinds are
/// split evenly between points and lines.
pub fn inject_outliers<R: Rng + ?Sized>(
    instance: &SyntheticInstance,
    n_total: usize,
    outlier_ratio: f64,
    rng: &mut R,
) -> Result<SyntheticInstance> {
    if !(0.0..1.0).contains(&outlier_ratio) {
        return Err(PoseError::ContractViolation("outlier ratio must lie in [0, 1)"));
    }
    let n_out = (n_total as f64 * outlier_ratio).round() as usize;
    let n_in = n_total.saturating_sub(n_out);
    if n_in < instance.len() {
        return Err(PoseError::ContractViolation("n_total leaves no room for the existing inliers"));
    }
    let pose = instance.ground_truth;
    let sigma = instance.noise_px / FOCAL_EQUIV;
    let mut out = instance.clone();

    let (in_pts, _) = split_half(n_in);
    while out.points.len() < in_pts.max(instance.points.len()) && out.len() < n_in {
        let p = visible_point(&pose, rng)?;
        out.points.push(observe_point(&pose, p, sigma, rng)?);
        out.point_labels.push(true);
    }
    while out.len() < n_in {
        let (a, b) = (visible_point(&pose, rng)?, visible_point(&pose, rng)?);
        if let Ok(l) = observe_line(&pose, a, b, sigma, rng) {
            out.lines.push(l);
            out.line_labels.push(true);
        }
    }

    let (out_pts, out_lines) = split_half(n_out);
    let ray = |rng: &mut R| -> Result<Vec3<f64>> { Ok(pose.apply(visible_point(&pose, rng)?).normalize()) };
    for _ in 0..out_pts {
        let world = scene_point(rng);
        out.points.push(PointCorrespondence::new(world, ray(rng)?)?);
        out.point_labels.push(false);
    }
    let mut added = 0;
    while added < out_lines {
        let (a, b) = (scene_point(rng), scene_point(rng));
        if let Ok(l) = LineCorrespondence::new(a, b, ray(rng)?, ray(rng)?) {
            out.lines.push(l);
            out.line_labels.push(false);
            added += 1;
        }
    }
    Ok(out)
}
