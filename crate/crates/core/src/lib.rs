//! Closed-form minimal solvers for calibrated absolute camera pose from mixed
//! point and line correspondences.
//!
//! * [`solve_p2p1l`]: two points and one line, via a quadratic (up to 4 poses).
//! * [`solve_p1p2l`]: one point and two lines, via a quartic (up to 8 poses).
//!
//! Both solvers detect coplanar scenes and switch to the variant that stays
//! stable there. Everything is generic over the scalar type ([`Real`], i.e.
//! `f32` or `f64`); the aliases below fix the common choices.
//!
//! ```
//! use minpose::{solve_p2p1l, LineCorrespondence, PointCorrespondence, Pose64, Vec3d};
//!
//! let gt = Pose64::identity();
//! let point = |p: Vec3d| PointCorrespondence::from_ray(p, gt.apply(p)).unwrap();
//! let (a, b) = (Vec3d::new(-1.0, 1.0, 6.0), Vec3d::new(0.5, 0.5, 4.0));
//! let line = LineCorrespondence::from_rays(a, b, gt.apply(a), gt.apply(b)).unwrap();
//! let poses = solve_p2p1l(&point(Vec3d::new(0.0, 0.0, 5.0)), &point(Vec3d::new(1.0, 0.0, 5.0)), &line).unwrap();
//! assert!(poses.poses.iter().any(|p| p.rotation.max_abs_diff(&gt.rotation) < 1e-12));
//! ```

// Negated comparisons route NaN into the rejection branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod frames;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod p1p2l;
pub mod p2p1l;
pub mod ransac;
pub mod roots;
pub mod scalar;
pub mod solution;
pub mod synthetic;

pub use error::{PoseError, Result};
pub use geometry::{LineCorrespondence, PointCorrespondence, Pose, RigidTransform};
pub use linalg::{Mat3, Vec3};
pub use p1p2l::solve_p1p2l;
pub use p2p1l::solve_p2p1l;
pub use ransac::{run_ransac, RansacConfig, RansacResult};
pub use roots::PolyRoots;
pub use scalar::Real;
pub use solution::{solve_minimal, Problem, Solutions, SolverVariant};

pub type Vec3d = Vec3<f64>;
pub type Vec3f = Vec3<f32>;
pub type Mat3d = Mat3<f64>;
pub type Mat3f = Mat3<f32>;
pub type Pose64 = Pose<f64>;
pub type Pose32 = Pose<f32>;
pub type PointCorrespondence64 = PointCorrespondence<f64>;
pub type PointCorrespondence32 = PointCorrespondence<f32>;
pub type LineCorrespondence64 = LineCorrespondence<f64>;
pub type LineCorrespondence32 = LineCorrespondence<f32>;
