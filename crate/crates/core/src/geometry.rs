//! Poses, correspondences, rotation construction and projection residuals.
//!
//! Image observations are unit bearing rays in the camera frame. A pose maps
//! world coordinates into camera coordinates: `x_cam = R * x_world + t`.

use serde::{Deserialize, Serialize};

use crate::error::{PoseError, Result};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;

/// `R22² + R23²` below this makes [`complete_rotation`] ill-posed.
pub const PLANE_ROTATION_THRESHOLD: f64 = 1e-8;

/// Rotation plus translation, `x ↦ R x + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidTransform<T> {
    pub rotation: Mat3<T>,
    pub translation: Vec3<T>,
}

/// Absolute camera pose: the rigid transform from world to camera coordinates.
pub type Pose<T> = RigidTransform<T>;

impl<T: Real> RigidTransform<T> {
    pub fn new(rotation: Mat3<T>, translation: Vec3<T>) -> Self {
        Self { rotation, translation }
    }

    pub fn identity() -> Self {
        Self::new(Mat3::identity(), Vec3::zeros())
    }

    #[inline]
    pub fn apply(&self, p: Vec3<T>) -> Vec3<T> {
        self.rotation * p + self.translation
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self::new(rt, -(rt * self.translation))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.rotation * other.rotation, self.rotation * other.translation + self.translation)
    }

    /// Camera center in world coordinates, `-Rᵀ t`.
    pub fn center(&self) -> Vec3<T> {
        -(self.rotation.transpose() * self.translation)
    }

    pub fn is_rigid(&self, tol: T) -> bool {
        self.rotation.orthogonality_defect() <= tol && (self.rotation.determinant() - T::one()).abs() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.rotation.is_finite() && self.translation.is_finite()
    }

    pub fn cast<U: Real>(&self) -> RigidTransform<U> {
        RigidTransform::new(self.rotation.cast(), self.translation.cast())
    }
}

/// A world point observed along a unit bearing ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointCorrespondence<T> {
    pub world: Vec3<T>,
    pub bearing: Vec3<T>,
}

impl<T: Real> PointCorrespondence<T> {
    /// Validates that `bearing` is unit length within 1e-12.
    pub fn new(world: Vec3<T>, bearing: Vec3<T>) -> Result<Self> {
        if !world.is_finite() || !bearing.is_finite() {
            return Err(PoseError::ContractViolation("non-finite point correspondence"));
        }
        if (bearing.norm() - T::one()).abs() > T::tolerance(1e-12) {
            return Err(PoseError::ContractViolation("bearing is not unit length"));
        }
        Ok(Self { world, bearing })
    }

    /// Builds a correspondence from any non-zero ray, normalizing it.
    pub fn from_ray(world: Vec3<T>, ray: Vec3<T>) -> Result<Self> {
        let bearing = ray.try_normalize().ok_or(PoseError::DegenerateInput("zero bearing ray"))?;
        Self::new(world, bearing)
    }

    pub fn cast<U: Real>(&self) -> PointCorrespondence<U> {
        PointCorrespondence { world: self.world.cast(), bearing: self.bearing.cast() }
    }
}

/// A 3D line through two world points, observed as the image line spanned by
/// two bearing rays.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineCorrespondence<T> {
    pub world_a: Vec3<T>,
    pub world_b: Vec3<T>,
    pub ray_a: Vec3<T>,
    pub ray_b: Vec3<T>,
}

impl<T: Real> LineCorrespondence<T> {
    pub fn new(world_a: Vec3<T>, world_b: Vec3<T>, ray_a: Vec3<T>, ray_b: Vec3<T>) -> Result<Self> {
        if !(world_a.is_finite() && world_b.is_finite() && ray_a.is_finite() && ray_b.is_finite()) {
            return Err(PoseError::ContractViolation("non-finite line correspondence"));
        }
        let tol = T::tolerance(1e-12);
        if (ray_a.norm() - T::one()).abs() > tol || (ray_b.norm() - T::one()).abs() > tol {
            return Err(PoseError::ContractViolation("line ray is not unit length"));
        }
        if (world_a - world_b).norm() <= T::zero() {
            return Err(PoseError::DegenerateInput("line endpoints coincide"));
        }
        if ray_a.cross(ray_b).norm() <= tol {
            return Err(PoseError::DegenerateInput("line rays are parallel"));
        }
        Ok(Self { world_a, world_b, ray_a, ray_b })
    }

    /// Builds a correspondence from arbitrary non-zero rays, normalizing them.
    pub fn from_rays(world_a: Vec3<T>, world_b: Vec3<T>, ray_a: Vec3<T>, ray_b: Vec3<T>) -> Result<Self> {
        let na = ray_a.try_normalize().ok_or(PoseError::DegenerateInput("zero line ray"))?;
        let nb = ray_b.try_normalize().ok_or(PoseError::DegenerateInput("zero line ray"))?;
        Self::new(world_a, world_b, na, nb)
    }

    /// Unnormalized normal of the interpretation plane, `ray_a × ray_b`.
    pub fn image_normal(&self) -> Vec3<T> {
        self.ray_a.cross(self.ray_b)
    }

    pub fn cast<U: Real>(&self) -> LineCorrespondence<U> {
        LineCorrespondence {
            world_a: self.world_a.cast(),
            world_b: self.world_b.cast(),
            ray_a: self.ray_a.cast(),
            ray_b: self.ray_b.cast(),
        }
    }
}

/// Rodrigues' formula `I + sin α [v]x + (1 - cos α) [v]x²` for a unit axis.
pub fn rotation_from_axis_angle<T: Real>(axis: Vec3<T>, angle: T) -> Result<Mat3<T>> {
    if (axis.norm() - T::one()).abs() > T::tolerance(1e-9) {
        return Err(PoseError::ContractViolation("rotation axis is not unit length"));
    }
    let k = Mat3::skew(axis);
    let k2 = k * k;
    Ok(Mat3::identity().add(&k.scale(angle.sin())).add(&k2.scale(T::one() - angle.cos())))
}

/// Completes a rotation from its first column `(R11, R21, R31)` and the
/// remaining entries `(R22, R23)` of its second row.
///
/// Fails with [`PoseError::PlaneRotationDegenerate`] when `R22² + R23²` is
/// below [`PLANE_ROTATION_THRESHOLD`]: the second row is then `±e1` and the
/// five entries no longer determine the rotation.
pub fn complete_rotation<T: Real>(r11: T, r21: T, r31: T, r22: T, r23: T) -> Result<Mat3<T>> {
    let s = r22 * r22 + r23 * r23;
    if !(s >= T::lit(PLANE_ROTATION_THRESHOLD)) {
        return Err(PoseError::PlaneRotationDegenerate);
    }
    let inv = s.recip();
    let r12 = (-r11 * r21 * r22 + r23 * r31) * inv;
    let r13 = (-r11 * r21 * r23 - r22 * r31) * inv;
    let r32 = (-r21 * r22 * r31 - r11 * r23) * inv;
    let r33 = (-r21 * r23 * r31 + r11 * r22) * inv;
    Ok(Mat3::from_rows_array([[r11, r12, r13], [r21, r22, r23], [r31, r32, r33]]))
}

/// One Newton step of the polar decomposition, `(R + R⁻ᵀ) / 2`.
pub fn orthonormalize<T: Real>(r: &Mat3<T>) -> Mat3<T> {
    let (a, b, c) = (r.row(0), r.row(1), r.row(2));
    let det = a.dot(b.cross(c));
    let inv_t = Mat3::from_rows(b.cross(c), c.cross(a), a.cross(b)).scale(det.recip());
    r.add(&inv_t).scale(T::lit(0.5))
}

/// Angle in `[0, π]` between the observed bearing and the ray to the
/// transformed world point.
pub fn point_residual<T: Real>(pose: &Pose<T>, pc: &PointCorrespondence<T>) -> Result<T> {
    let x = pose.apply(pc.world);
    if x.norm() <= T::lit(1e-12) {
        return Err(PoseError::DegenerateGeometry("point at the camera center"));
    }
    Ok(pc.bearing.cross(x).norm().atan2(pc.bearing.dot(x)))
}

/// Largest normalized distance `|nᵀx| / ‖x‖` of the two transformed line
/// endpoints from the interpretation plane with unit normal `n`.
pub fn line_residual<T: Real>(pose: &Pose<T>, lc: &LineCorrespondence<T>) -> Result<T> {
    let n = lc.image_normal().normalize();
    let mut worst = T::zero();
    for p in [lc.world_a, lc.world_b] {
        let x = pose.apply(p);
        let len = x.norm();
        if len <= T::lit(1e-12) {
            return Err(PoseError::DegenerateGeometry("line endpoint at the camera center"));
        }
        worst = worst.max(n.dot(x).abs() / len);
    }
    Ok(worst)
}
