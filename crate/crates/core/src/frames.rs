//! Special world and camera frames that canonicalize the minimal data.
//!
//! Both solvers work in a camera frame whose center sits at `C = (0, 0, -1)`,
//! with image features described by where their rays cross the plane `z = 0`.
//! A pose `(R, T)` expressed in the special frames maps a world point `X` (in
//! the special world frame) to `R X + T` in the special camera frame, so the
//! ray from `C` through an observation `D` must be parallel to `R X + T - C`.
//!
//! The camera rotation depends only on the observed rays, and the world
//! transform only on the world features, never on the unknown pose.

use serde::{Deserialize, Serialize};

use crate::error::{PoseError, Result};
use crate::geometry::{LineCorrespondence, PointCorrespondence, Pose, RigidTransform};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;

/// Camera center in the special camera frame.
#[inline]
pub fn camera_center<T: Real>() -> Vec3<T> {
    Vec3::new(T::zero(), T::zero(), -T::one())
}

/// Intersection of the ray from `C` with direction `dir` and the plane `z = 0`.
#[inline]
fn plane_coords<T: Real>(dir: Vec3<T>) -> (T, T) {
    (dir.x / dir.z, dir.y / dir.z)
}

/// Canonical data for two points and one line.
///
/// World: `P1 = 0`, `P2 = (x2, 0, 0)`, `L3 = (x3, y3, 0)`, `L4 = (x4, y4, z4)`.
/// Camera: the image line is the projection of the x-axis, point `i` is the
/// projection of `(a_i, b_i, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P2P1LFrame<T> {
    pub world_xform: RigidTransform<T>,
    pub cam_rotation: Mat3<T>,
    pub x2: T,
    pub x3: T,
    pub y3: T,
    pub x4: T,
    pub y4: T,
    pub z4: T,
    pub a1: T,
    pub b1: T,
    pub a2: T,
    pub b2: T,
}

/// Canonical data for one point and two lines.
///
/// World: `P1 = 0` and the four line endpoints `L1..L4` (optionally rotated so
/// that `L1 - L2` is along `+z`). Camera: the two image lines meet at the
/// projection of the origin, the first image line is the projection of the
/// x-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P1P2LFrame<T> {
    pub world_xform: RigidTransform<T>,
    pub cam_rotation: Mat3<T>,
    /// `L1, L2` (first line) and `L3, L4` (second line) in the special world frame.
    pub line_points: [Vec3<T>; 4],
    pub a1: T,
    pub b1: T,
    pub a2: T,
    pub a4: T,
    pub b4: T,
    pub a5: T,
    pub b5: T,
    /// Point bearing rotated into the special camera frame.
    pub point_ray: Vec3<T>,
    /// Unit normal of the second interpretation plane; its z-component is zero.
    pub line2_normal: Vec3<T>,
    pub stabilized: bool,
}

/// Builds the two-point-one-line frames.
///
/// The world rotation sends `P2 - P1` to `+x` and puts `L3` in the upper
/// half of the xy-plane; the camera rotation sends the first line ray to
/// `+z` and the second into the xz-plane with positive x.
pub fn build_p2p1l_frame<T: Real>(
    pc1: &PointCorrespondence<T>,
    pc2: &PointCorrespondence<T>,
    lc: &LineCorrespondence<T>,
) -> Result<P2P1LFrame<T>> {
    let p1 = pc1.world;
    let base = pc2.world - p1;
    let x2 = base.norm();
    if !(x2 > T::lit(1e-9)) {
        return Err(PoseError::DegenerateInput("coincident world points"));
    }
    let e1 = base * x2.recip();
    let w3 = lc.world_a - p1;
    let x3 = w3.dot(e1);
    let perp = w3 - e1 * x3;
    let y3 = perp.norm();
    if !(y3 > T::lit(1e-9)) {
        return Err(PoseError::CollinearConfiguration);
    }
    let e2 = perp * y3.recip();
    let rw = Mat3::from_rows(e1, e2, e1.cross(e2));
    let world_xform = RigidTransform::new(rw, -(rw * p1));
    let l4 = world_xform.apply(lc.world_b);

    let d3 = lc.ray_a;
    let n = lc.image_normal().normalize();
    let rc = Mat3::from_rows(n.cross(d3), n, d3);

    let q1 = rc * pc1.bearing;
    let q2 = rc * pc2.bearing;
    if q1.z.abs() <= T::lit(1e-12) || q2.z.abs() <= T::lit(1e-12) {
        return Err(PoseError::DegenerateInput("point ray perpendicular to the first line ray"));
    }
    let (a1, b1) = plane_coords(q1);
    let (a2, b2) = plane_coords(q2);

    Ok(P2P1LFrame { world_xform, cam_rotation: rc, x2, x3, y3, x4: l4.x, y4: l4.y, z4: l4.z, a1, b1, a2, b2 })
}

/// Rotation whose third row is the unit vector `dir` and whose first row is
/// the direction of `hint` perpendicular to `dir`. Falls back to the
/// coordinate axis least aligned with `dir` when `hint` is (nearly) parallel.
fn rotation_to_z<T: Real>(dir: Vec3<T>, hint: Vec3<T>) -> Mat3<T> {
    let perp = hint - dir * hint.dot(dir);
    let r1 = if perp.norm() > T::lit(1e-6) * hint.norm() {
        perp.normalize()
    } else {
        let (ax, ay, az) = (dir.x.abs(), dir.y.abs(), dir.z.abs());
        let e = if ax <= ay && ax <= az {
            Vec3::unit_x()
        } else if ay <= az {
            Vec3::unit_y()
        } else {
            Vec3::unit_z()
        };
        (e - dir * e.dot(dir)).normalize()
    };
    Mat3::from_rows(r1, dir.cross(r1), dir)
}

/// Builds the one-point-two-line frames.
///
/// With `stabilize`, the world is additionally rotated so that the first 3D
/// line runs along `+z`, which keeps `Z1 - Z2` as large as possible.
pub fn build_p1p2l_frame<T: Real>(
    pc: &PointCorrespondence<T>,
    lc1: &LineCorrespondence<T>,
    lc2: &LineCorrespondence<T>,
    stabilize: bool,
) -> Result<P1P2LFrame<T>> {
    let n1 = lc1.image_normal().normalize();
    let n2 = lc2.image_normal().normalize();
    let mut meet = n1.cross(n2);
    let meet_norm = meet.norm();
    if !(meet_norm > T::lit(1e-12)) {
        return Err(PoseError::DegenerateInput("image lines are parallel"));
    }
    meet = meet * meet_norm.recip();
    if meet.dot(pc.bearing) < T::zero() {
        meet = -meet;
    }
    let rc = Mat3::from_rows(n1.cross(meet), n1, meet);

    let p1 = pc.world;
    let rw = if stabilize {
        let dir = lc1.world_a - lc1.world_b;
        let dir = dir.try_normalize().ok_or(PoseError::DegenerateInput("first line has zero length"))?;
        rotation_to_z(dir, lc1.world_a - p1)
    } else {
        Mat3::identity()
    };
    let world_xform = RigidTransform::new(rw, -(rw * p1));
    let line_points = [lc1.world_a, lc1.world_b, lc2.world_a, lc2.world_b].map(|p| world_xform.apply(p));

    let point_ray = rc * pc.bearing;
    let (a1, b1) = plane_coords(point_ray);
    // Use the line-1 ray farther from the intersection so that D2 differs from D3.
    let far = if lc1.ray_a.dot(meet).abs() <= lc1.ray_b.dot(meet).abs() { lc1.ray_a } else { lc1.ray_b };
    let (a2, _) = plane_coords(rc * far);
    let (a4, b4) = plane_coords(rc * lc2.ray_a);
    let (a5, b5) = plane_coords(rc * lc2.ray_b);
    let m = rc * n2;
    let line2_normal = Vec3::new(m.x, m.y, T::zero()).normalize();

    Ok(P1P2LFrame {
        world_xform,
        cam_rotation: rc,
        line_points,
        a1,
        b1,
        a2,
        a4,
        b4,
        a5,
        b5,
        point_ray,
        line2_normal,
        stabilized: stabilize,
    })
}

/// Maps a pose solved in the special frames back to the input frames.
///
/// With `x1 = Rw x0 + tw` and camera coordinates `c1 = Rc c0 + C`, the input
/// pose is `R0 = Rcᵀ R Rw`, `T0 = Rcᵀ (R tw + T - C)`.
pub fn unframe_pose<T: Real>(
    pose_in_frame: &Pose<T>,
    world_xform: &RigidTransform<T>,
    cam_rotation: &Mat3<T>,
) -> Pose<T> {
    let rct = cam_rotation.transpose();
    let r = pose_in_frame.rotation;
    Pose::new(
        rct * r * world_xform.rotation,
        rct * (r * world_xform.translation + pose_in_frame.translation - camera_center()),
    )
}

/// Inverse of [`unframe_pose`]: expresses an input-frame pose in the special frames.
pub fn frame_pose<T: Real>(pose: &Pose<T>, world_xform: &RigidTransform<T>, cam_rotation: &Mat3<T>) -> Pose<T> {
    let r = *cam_rotation * pose.rotation * world_xform.rotation.transpose();
    let t = *cam_rotation * pose.translation + camera_center() - r * world_xform.translation;
    Pose::new(r, t)
}

impl<T: Real> P2P1LFrame<T> {
    pub fn unframe(&self, pose_in_frame: &Pose<T>) -> Pose<T> {
        unframe_pose(pose_in_frame, &self.world_xform, &self.cam_rotation)
    }

    pub fn to_frame(&self, pose: &Pose<T>) -> Pose<T> {
        frame_pose(pose, &self.world_xform, &self.cam_rotation)
    }
}

impl<T: Real> P1P2LFrame<T> {
    pub fn unframe(&self, pose_in_frame: &Pose<T>) -> Pose<T> {
        unframe_pose(pose_in_frame, &self.world_xform, &self.cam_rotation)
    }

    pub fn to_frame(&self, pose: &Pose<T>) -> Pose<T> {
        frame_pose(pose, &self.world_xform, &self.cam_rotation)
    }
}
