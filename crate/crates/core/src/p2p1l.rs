//! Absolute pose from two point and one line correspondences.
//!
//! In the special frames the projection constraints are linear in the pose.
//! They leave two unknowns free; writing the remaining rotation entries and
//! the translation as linear forms in those two, the unit-norm conditions on
//! the first column and the second row of `R` become two homogeneous
//! quadratics. Their ratio gives a quadratic in `v`, and either one then
//! fixes the scale `u`, for up to four poses in total.
//!
//! Two parametrizations are provided. The generic one uses `(R11, R21)` and
//! divides by `Z4`, so it breaks down when all features are coplanar. The
//! coplanar one uses `(R21, R23)` and stays well defined at `Z4 = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{PoseError, Result};
use crate::frames::{build_p2p1l_frame, P2P1LFrame};
use crate::geometry::{complete_rotation, LineCorrespondence, PointCorrespondence, Pose};
use crate::linalg::Vec3;
use crate::roots::solve_quadratic;
use crate::scalar::Real;
use crate::solution::{accept, Solutions, SolverVariant};

/// Relative size of `Z4` below which the scene is treated as coplanar.
pub const COPLANAR_THRESHOLD: f64 = 1e-7;

/// Quadratic roots giving `u` at or below this are discarded.
pub const MIN_U: f64 = 1e-14;

/// `k.0 * s + k.1 * t` in the two free unknowns `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Form<T>(T, T);

impl<T: Real> Form<T> {
    #[inline]
    fn at(self, s: T, t: T) -> T {
        self.0 * s + self.1 * t
    }

    #[inline]
    fn scale(self, k: T) -> Self {
        Form(self.0 * k, self.1 * k)
    }

    /// Coefficients of the square on the basis `(s², s t, t²)`.
    #[inline]
    fn square(self) -> [T; 3] {
        [self.0 * self.0, (self.0 + self.0) * self.1, self.1 * self.1]
    }
}

fn add3<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Rotation entries and translation scale as forms in the free unknowns.
#[derive(Debug, Clone, Copy)]
struct Forms<T> {
    r11: Form<T>,
    r21: Form<T>,
    r31: Form<T>,
    r22: Form<T>,
    r23: Form<T>,
    /// `B`, the z-coordinate of `T - C`.
    b: Form<T>,
}

/// Coefficients of the two quadratic constraints
/// `c1 s² + c2 s t + c3 t² = 1` (first column of `R`) and
/// `d1 s² + d2 s t + d3 t² = 1` (second row of `R`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P2P1LCoefficients<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

impl<T: Real> P2P1LCoefficients<T> {
    fn from_forms(f: &Forms<T>) -> Self {
        let c = add3(add3(f.r11.square(), f.r21.square()), f.r31.square());
        let d = add3(add3(f.r21.square(), f.r22.square()), f.r23.square());
        Self { c1: c[0], c2: c[1], c3: c[2], d1: d[0], d2: d[1], d3: d[2] }
    }

    /// Coefficients in `(R11, R21)` for the generic variant.
    pub fn generic(frame: &P2P1LFrame<T>) -> Result<Self> {
        generic_forms(frame).map(|f| Self::from_forms(&f))
    }

    /// Coefficients in `(R21, R23)` for the coplanar variant.
    pub fn coplanar(frame: &P2P1LFrame<T>) -> Result<Self> {
        coplanar_forms(frame).map(|f| Self::from_forms(&f))
    }

    /// `(c3 - d3) v² + (c2 - d2) v + (c1 - d1)`, highest degree first.
    pub fn v_quadratic(&self) -> [T; 3] {
        [self.c3 - self.d3, self.c2 - self.d2, self.c1 - self.d1]
    }
}

/// `D = a1 b2 - a2 b1`, rejected when it vanishes relative to its terms.
fn image_determinant<T: Real>(f: &P2P1LFrame<T>) -> Result<T> {
    let (p, q) = (f.a1 * f.b2, f.a2 * f.b1);
    let d = p - q;
    if !(d.abs() > T::tolerance(1e-12) * p.abs().max(q.abs())) {
        return Err(PoseError::DegenerateImagePoints);
    }
    Ok(d)
}

fn generic_forms<T: Real>(f: &P2P1LFrame<T>) -> Result<Forms<T>> {
    if f.z4 == T::zero() {
        return Err(PoseError::NearDegenerateFrame("Z4 is zero; the coplanar variant applies"));
    }
    let d = image_determinant(f)?;
    let (o, z) = (T::one(), T::zero());
    let r11 = Form(o, z);
    let r21 = Form(z, o);
    let b = Form(-f.x2 * f.b2, f.x2 * f.a2).scale(d.recip());
    let r31 = Form(f.b2 - f.b1, f.a1 - f.a2).scale(d.recip());
    let b1b = b.scale(f.b1);
    let r22 = Form(-b1b.0, -(f.x3 + b1b.1)).scale(f.y3.recip());
    let r23 = Form(-(f.y4 * r22.0 + b1b.0), -(f.x4 + f.y4 * r22.1 + b1b.1)).scale(f.z4.recip());
    Ok(Forms { r11, r21, r31, r22, r23, b })
}

fn coplanar_forms<T: Real>(f: &P2P1LFrame<T>) -> Result<Forms<T>> {
    let dy = f.y3 - f.y4;
    if !(dy.abs() > T::tolerance(1e-12) * f.y3.abs().max(f.y4.abs())) {
        return Err(PoseError::DegenerateInput("line parallel to the line through the two points"));
    }
    let tiny = T::tolerance(1e-12);
    if !(f.b1.abs() > tiny && f.b2.abs() > tiny) {
        return Err(PoseError::DegenerateImagePoints);
    }
    let (o, z) = (T::one(), T::zero());
    let d = f.a1 * f.b2 - f.a2 * f.b1;
    let r21 = Form(o, z);
    let r23 = Form(z, o);
    let b1b = Form(-(f.x4 * f.y3 - f.x3 * f.y4), -f.y3 * f.z4).scale(dy.recip());
    let b = b1b.scale(f.b1.recip());
    let inv = (f.b2 * f.x2).recip();
    let r11 = Form(f.x2 * f.a2 - d * b.0, -d * b.1).scale(inv);
    let r31 = Form(f.x2 + (f.b1 - f.b2) * b.0, (f.b1 - f.b2) * b.1).scale(inv);
    let r22 = Form(-(f.x3 + b1b.0), -b1b.1).scale(f.y3.recip());
    Ok(Forms { r11, r21, r31, r22, r23, b })
}

/// Roots of the `v` quadratic expanded into in-frame poses.
fn poses_in_frame<T: Real>(f: &P2P1LFrame<T>, forms: &Forms<T>, out: &mut Vec<Pose<T>>) -> Result<()> {
    let k = P2P1LCoefficients::from_forms(forms);
    let [qa, qb, qc] = k.v_quadratic();
    for v in solve_quadratic(qa, qb, qc)?.iter() {
        let cv = k.c1 + (k.c2 + k.c3 * v) * v;
        let dv = k.d1 + (k.d2 + k.d3 * v) * v;
        let denom = if cv.abs() >= dv.abs() { cv } else { dv };
        let u = denom.recip();
        if !(u > T::lit(MIN_U)) {
            continue;
        }
        let root = u.sqrt();
        for s in [root, -root] {
            let t = v * s;
            let Ok(r) = complete_rotation(
                forms.r11.at(s, t),
                forms.r21.at(s, t),
                forms.r31.at(s, t),
                forms.r22.at(s, t),
                forms.r23.at(s, t),
            ) else {
                continue;
            };
            let bz = forms.b.at(s, t);
            out.push(Pose::new(r, Vec3::new(f.a1 * bz, f.b1 * bz, bz - T::one())));
        }
    }
    Ok(())
}

fn solve_with<T: Real>(
    pc1: &PointCorrespondence<T>,
    pc2: &PointCorrespondence<T>,
    lc: &LineCorrespondence<T>,
    frame: &P2P1LFrame<T>,
    forms: Forms<T>,
) -> Result<Vec<Pose<T>>> {
    let mut framed = Vec::with_capacity(4);
    poses_in_frame(frame, &forms, &mut framed)?;
    Ok(framed.iter().map(|p| frame.unframe(p)).filter(|p| accept(p, &[pc1, pc2], &[lc])).collect())
}

/// Generic solver; undefined for coplanar scenes (`Z4 = 0`).
pub fn solve_p2p1l_generic<T: Real>(
    pc1: &PointCorrespondence<T>,
    pc2: &PointCorrespondence<T>,
    lc: &LineCorrespondence<T>,
) -> Result<Vec<Pose<T>>> {
    let frame = build_p2p1l_frame(pc1, pc2, lc)?;
    solve_with(pc1, pc2, lc, &frame, generic_forms(&frame)?)
}

/// Solver variant that remains valid when all features are coplanar.
pub fn solve_p2p1l_coplanar<T: Real>(
    pc1: &PointCorrespondence<T>,
    pc2: &PointCorrespondence<T>,
    lc: &LineCorrespondence<T>,
) -> Result<Vec<Pose<T>>> {
    let frame = build_p2p1l_frame(pc1, pc2, lc)?;
    solve_with(pc1, pc2, lc, &frame, coplanar_forms(&frame)?)
}

/// True when the frame places the line's second point (nearly) in the plane
/// of the two points and the first line point.
pub fn is_coplanar_frame<T: Real>(f: &P2P1LFrame<T>) -> bool {
    let scale = f.x4.abs().max(f.y4.abs()).max(f.x2).max(T::one());
    f.z4.abs() < T::lit(COPLANAR_THRESHOLD) * scale
}

/// Solves with the variant suited to the scene geometry.
pub fn solve_p2p1l<T: Real>(
    pc1: &PointCorrespondence<T>,
    pc2: &PointCorrespondence<T>,
    lc: &LineCorrespondence<T>,
) -> Result<Solutions<T>> {
    let frame = build_p2p1l_frame(pc1, pc2, lc)?;
    let (variant, forms) = if is_coplanar_frame(&frame) {
        (SolverVariant::P2P1LCoplanar, coplanar_forms(&frame)?)
    } else {
        (SolverVariant::P2P1LGeneric, generic_forms(&frame)?)
    };
    Ok(Solutions { variant, poses: solve_with(pc1, pc2, lc, &frame, forms)? })
}

/// Translation implied by the first rotation column entries `R11, R21` in the
/// special frames (generic parametrization).
pub fn translation_in_frame<T: Real>(frame: &P2P1LFrame<T>, r11: T, r21: T) -> Result<Vec3<T>> {
    let d = image_determinant(frame)?;
    let bz = frame.x2 * (frame.a2 * r21 - frame.b2 * r11) / d;
    Ok(Vec3::new(frame.a1 * bz, frame.b1 * bz, bz - T::one()))
}
