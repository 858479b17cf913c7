//! Pose error measures and batch statistics.

use serde::{Deserialize, Serialize};

use crate::error::{PoseError, Result};
use crate::geometry::Pose;
use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;

/// Angle of the relative rotation `R_estᵀ R_gt`, in `[0, π]`.
///
/// Evaluated as `atan2(sin θ, cos θ)` from the skew and symmetric parts of
/// the relative rotation, which equals `arccos((tr - 1) / 2)` but keeps full
/// relative precision for tiny angles, where the arccos form bottoms out
/// around `1e-8`.
pub fn rotation_error<T: Real>(r_est: &Mat3<T>, r_gt: &Mat3<T>) -> T {
    let m = r_est.transpose() * *r_gt;
    let half = T::lit(0.5);
    let axis = Vec3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]);
    let sin = axis.norm() * half;
    let cos = (m.trace() - T::one()) * half;
    sin.atan2(cos)
}

/// `‖T_est − T_gt‖ / ‖T_gt‖`.
pub fn translation_error<T: Real>(t_est: &Vec3<T>, t_gt: &Vec3<T>) -> Result<T> {
    let base = t_gt.norm();
    if !(base > T::lit(1e-12)) {
        return Err(PoseError::ZeroBaseline);
    }
    Ok((*t_est - *t_gt).norm() / base)
}

/// Rotation and translation error of the solution closest in rotation to
/// `gt`, or `(π, ∞)` when there are no solutions.
pub fn best_solution_error<T: Real>(solutions: &[Pose<T>], gt: &Pose<T>) -> (T, T) {
    let mut best = (T::PI(), T::infinity());
    for pose in solutions {
        let rot = rotation_error(&pose.rotation, &gt.rotation);
        if rot < best.0 || (best.1.is_infinite() && rot <= best.0) {
            let tr = translation_error(&pose.translation, &gt.translation).unwrap_or(T::infinity());
            best = (rot, tr);
        }
    }
    best
}

/// Summary of a batch of errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl ErrorStats {
    /// Returns `None` for an empty batch. NaN values sort last.
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) };
        Some(Self { mean: sorted.iter().sum::<f64>() / n as f64, median, min: sorted[0], max: sorted[n - 1], count: n })
    }
}

/// Per-sample errors of a solver batch, including failures.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ErrorBatch {
    pub rotation: Vec<f64>,
    pub translation: Vec<f64>,
    /// Samples for which no pose was returned.
    pub failures: usize,
}

impl ErrorBatch {
    pub fn with_capacity(n: usize) -> Self {
        Self { rotation: Vec::with_capacity(n), translation: Vec::with_capacity(n), failures: 0 }
    }

    /// Records the best of `solutions`; an empty list counts as a failure.
    pub fn record<T: Real>(&mut self, solutions: &[Pose<T>], gt: &Pose<T>) {
        if solutions.is_empty() {
            self.failures += 1;
        }
        let (r, t) = best_solution_error(solutions, gt);
        self.rotation.push(r.as_f64());
        self.translation.push(t.as_f64());
    }

    /// Records a sample on which the solver reported an error.
    pub fn record_failure(&mut self) {
        self.failures += 1;
        self.rotation.push(std::f64::consts::PI);
        self.translation.push(f64::INFINITY);
    }

    pub fn extend(&mut self, other: ErrorBatch) {
        self.rotation.extend(other.rotation);
        self.translation.extend(other.translation);
        self.failures += other.failures;
    }

    pub fn len(&self) -> usize {
        self.rotation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotation.is_empty()
    }

    pub fn rotation_stats(&self) -> Option<ErrorStats> {
        ErrorStats::from_samples(&self.rotation)
    }

    pub fn translation_stats(&self) -> Option<ErrorStats> {
        ErrorStats::from_samples(&self.translation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rotation_from_axis_angle;
    use proptest::prelude::*;

    fn rot(axis: [f64; 3], angle: f64) -> Mat3<f64> {
        rotation_from_axis_angle(Vec3::from_array(axis).normalize(), angle).unwrap()
    }

    /// Angle of the relative rotation via unit quaternions.
    fn quaternion_angle(a: &Mat3<f64>, b: &Mat3<f64>) -> f64 {
        let to_quat = |m: &Mat3<f64>| {
            // Shepperd's method, branch on the largest diagonal combination.
            let t = m.trace();
            let cands = [t, m[(0, 0)], m[(1, 1)], m[(2, 2)]];
            let k = (0..4).max_by(|&i, &j| cands[i].total_cmp(&cands[j])).unwrap();
            match k {
                0 => {
                    let s = (1.0 + t).sqrt() * 2.0;
                    [0.25 * s, (m[(2, 1)] - m[(1, 2)]) / s, (m[(0, 2)] - m[(2, 0)]) / s, (m[(1, 0)] - m[(0, 1)]) / s]
                }
                1 => {
                    let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
                    [(m[(2, 1)] - m[(1, 2)]) / s, 0.25 * s, (m[(0, 1)] + m[(1, 0)]) / s, (m[(0, 2)] + m[(2, 0)]) / s]
                }
                2 => {
                    let s = (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt() * 2.0;
                    [(m[(0, 2)] - m[(2, 0)]) / s, (m[(0, 1)] + m[(1, 0)]) / s, 0.25 * s, (m[(1, 2)] + m[(2, 1)]) / s]
                }
                _ => {
                    let s = (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt() * 2.0;
                    [(m[(1, 0)] - m[(0, 1)]) / s, (m[(0, 2)] + m[(2, 0)]) / s, (m[(1, 2)] + m[(2, 1)]) / s, 0.25 * s]
                }
            }
        };
        let (p, q) = (to_quat(a), to_quat(b));
        let dot: f64 = p.iter().zip(q.iter()).map(|(x, y)| x * y).sum();
        2.0 * dot.abs().min(1.0).acos()
    }

    #[test]
    fn rotation_error_examples() {
        let r = rot([0.3, -0.2, 0.9], 1.1);
        assert_eq!(rotation_error(&r, &r), 0.0);
        let z = rot([0.0, 0.0, 1.0], 0.3);
        assert!((rotation_error(&Mat3::identity(), &z) - 0.3).abs() < 1e-15);
        let tiny = rot([1.0, 2.0, 3.0], 1e-14);
        assert!((rotation_error(&Mat3::identity(), &tiny) - 1e-14).abs() < 1e-20);
    }

    #[test]
    fn translation_error_examples() {
        let t: Vec3<f64> = Vec3::new(0.3, -0.4, 1.2);
        assert_eq!(translation_error(&t, &t).unwrap(), 0.0);
        assert!((translation_error(&(t * 2.0), &t).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(translation_error(&t, &Vec3::zeros()).unwrap_err(), PoseError::ZeroBaseline);
    }

    #[test]
    fn best_solution_picks_closest_rotation() {
        let gt = Pose::new(rot([0.0, 1.0, 0.0], 0.4), Vec3::new(0.0, 0.0, 1.0));
        let near = Pose::new(rot([0.0, 1.0, 0.0], 0.4 + 1e-6), Vec3::new(0.0, 0.0, 1.1));
        let others = [
            Pose::new(rot([1.0, 0.0, 0.0], 2.0), Vec3::zeros()),
            near,
            Pose::new(rot([0.0, 0.0, 1.0], -1.0), Vec3::zeros()),
            Pose::new(rot([1.0, 1.0, 0.0], 0.5), Vec3::zeros()),
        ];
        let (r, t) = best_solution_error(&others, &gt);
        assert!((r - 1e-6).abs() < 1e-12);
        assert!((t - 0.1).abs() < 1e-12);
        assert_eq!(best_solution_error(&[gt], &gt), (0.0, 0.0));
        let (r, t) = best_solution_error::<f64>(&[], &gt);
        assert_eq!(r, std::f64::consts::PI);
        assert!(t.is_infinite());
    }

    #[test]
    fn stats_of_small_batches() {
        let s = ErrorStats::from_samples(&[3.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!((s.min, s.median, s.max, s.mean, s.count), (1.0, 2.5, 10.0, 4.0, 4));
        assert!(ErrorStats::from_samples(&[]).is_none());
        let mut b = ErrorBatch::default();
        b.record::<f64>(&[], &Pose::identity());
        b.record_failure();
        assert_eq!(b.failures, 2);
        assert_eq!(b.rotation_stats().unwrap().median, std::f64::consts::PI);
    }

    fn any_rotation() -> impl Strategy<Value = Mat3<f64>> {
        (prop::array::uniform3(-1.0f64..1.0), -3.1f64..3.1)
            .prop_filter("axis", |(a, _)| Vec3::from_array(*a).norm() > 1e-3)
            .prop_map(|(a, t)| rot(a, t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rotation_error_matches_quaternion_oracle(a in any_rotation(), b in any_rotation()) {
            prop_assert!((rotation_error(&a, &b) - quaternion_angle(&a, &b)).abs() < 1e-10);
        }

        #[test]
        fn rotation_error_is_bi_invariant(a in any_rotation(), b in any_rotation(), q in any_rotation()) {
            let e = rotation_error(&a, &b);
            prop_assert!((rotation_error(&b, &a) - e).abs() < 1e-12);
            prop_assert!((rotation_error(&(q * a), &(q * b)) - e).abs() < 1e-12);
            prop_assert!((rotation_error(&(a * q), &(b * q)) - e).abs() < 1e-12);
        }

        #[test]
        fn stats_are_permutation_invariant(mut xs in prop::collection::vec(0.0f64..10.0, 1..50)) {
            let a = ErrorStats::from_samples(&xs).unwrap();
            xs.reverse();
            let b = ErrorStats::from_samples(&xs).unwrap();
            prop_assert_eq!((a.median, a.min, a.max, a.count), (b.median, b.min, b.max, b.count));
            prop_assert!((a.mean - b.mean).abs() < 1e-12);
        }
    }
}
