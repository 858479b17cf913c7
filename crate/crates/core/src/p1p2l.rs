//! Absolute pose from one point and two line correspondences.
//!
//! In the special frames the point fixes the translation direction, the first
//! line gives `R23` as a combination of `R21, R22`, and the second line gives
//! `R11, R12` as linear combinations of `R13, R21, R22`. The orthonormality of
//! the first two rotation rows then yields three quadratics in those three
//! unknowns. The orthogonality constraint is linear in `R13`; eliminating it
//! leaves a single quartic in `v = R21 / R22`.
//!
//! The linear step divides by `Z1 - Z2`. Rotating the world so that the first
//! line is vertical keeps this well away from zero ("stabilized" framing), but
//! makes the 2x2 system for `R11, R12` singular when the whole scene is planar,
//! so planar scenes use the unstabilized framing.

use serde::{Deserialize, Serialize};

use crate::error::{PoseError, Result};
use crate::frames::{build_p1p2l_frame, camera_center, P1P2LFrame};
use crate::geometry::{orthonormalize, LineCorrespondence, PointCorrespondence, Pose};
use crate::linalg::{Mat3, Vec3};
use crate::roots::solve_quartic;
use crate::scalar::Real;
use crate::solution::{accept, Solutions, SolverVariant};

/// Relative plane-fit residual below which the five world points count as coplanar.
pub const COPLANAR_THRESHOLD: f64 = 1e-7;

const MAX_POLAR_STEPS: usize = 3;

/// Linear forms, quadratic constraints and quartic of the one-point-two-line
/// problem in a given frame.
///
/// Linear forms are in `(R13, R21, R22)`; the quadratic rows `d` are on the
/// monomials `(R13², R13 R21, R13 R22, R21², R21 R22, R22²)`:
///
/// * `d1..d6`: `R11² + R12² + R13² = 1`
/// * `d7..d9` (on the last three monomials): `R21² + R22² + R23² = 1`
/// * `d10..d14` (on the last five monomials): `R11 R21 + R12 R22 + R13 R23 = 0`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P1P2LCoefficients<T> {
    /// `R23 = r23[0] R21 + r23[1] R22`.
    pub r23: [T; 2],
    pub r11: [T; 3],
    pub r12: [T; 3],
    /// `s = r2 · L1` as a form in `(R21, R22)`; the translation is `-s q / q_y + C`.
    pub s: [T; 2],
    /// `d1..d14`, stored zero-based.
    pub d: [T; 14],
    /// Quartic in `v`, highest degree first.
    pub alpha: [T; 5],
}

fn mul_poly<T: Real, const A: usize, const B: usize, const C: usize>(a: [T; A], b: [T; B]) -> [T; C] {
    debug_assert_eq!(A + B - 1, C);
    let mut out = [T::zero(); C];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

/// Coefficients of `f · g` for forms in `(R13, R21, R22)` on the monomial basis.
fn form_product<T: Real>(f: [T; 3], g: [T; 3]) -> [T; 6] {
    [
        f[0] * g[0],
        f[0] * g[1] + f[1] * g[0],
        f[0] * g[2] + f[2] * g[0],
        f[1] * g[1],
        f[1] * g[2] + f[2] * g[1],
        f[2] * g[2],
    ]
}

fn add6<T: Real>(a: [T; 6], b: [T; 6]) -> [T; 6] {
    std::array::from_fn(|i| a[i] + b[i])
}

impl<T: Real> P1P2LCoefficients<T> {
    pub fn new(frame: &P1P2LFrame<T>) -> Result<Self> {
        let [l1, l2, l3, l4] = frame.line_points;
        let dz = l1.z - l2.z;
        let span = l1.max_abs().max(l2.max_abs());
        if !(dz.abs() > T::tolerance(1e-12) * span) {
            return Err(PoseError::NearDegenerateFrame("first line is horizontal (Z1 = Z2)"));
        }
        let q = frame.point_ray;
        if !(q.y.abs() > T::tolerance(1e-12) * q.norm()) {
            return Err(PoseError::DegenerateImagePoints);
        }
        let det = l3.x * l4.y - l4.x * l3.y;
        if !(det.abs() > T::tolerance(1e-12) * (l3.x * l4.y).abs().max((l4.x * l3.y).abs())) {
            return Err(PoseError::NearDegenerateFrame("second line degenerate in the special frame"));
        }
        let (z, o) = (T::zero(), T::one());
        let c1 = (l2.x - l1.x) / dz;
        let c2 = (l2.y - l1.y) / dz;
        // r2 · L as a form in (R21, R22).
        let row2_dot = |p: Vec3<T>| [p.x + c1 * p.z, p.y + c2 * p.z];
        let s = row2_dot(l1);

        let m = frame.line2_normal;
        let mp = (m.x * q.x + m.y * q.y) / q.y;
        // m1 (R11 X + R12 Y) = rhs(L) as a form in (R13, R21, R22).
        let rhs = |p: Vec3<T>| {
            let w = row2_dot(p);
            [-m.x * p.z, -m.y * w[0] + mp * s[0], -m.y * w[1] + mp * s[1]]
        };
        let (h3, h4) = (rhs(l3), rhs(l4));
        let k = (m.x * det).recip();
        let r11: [T; 3] = std::array::from_fn(|i| (l4.y * h3[i] - l3.y * h4[i]) * k);
        let r12: [T; 3] = std::array::from_fn(|i| (l3.x * h4[i] - l4.x * h3[i]) * k);
        let r13 = [o, z, z];
        let r21 = [z, o, z];
        let r22 = [z, z, o];
        let r23 = [z, c1, c2];

        let first = add6(add6(form_product(r11, r11), form_product(r12, r12)), form_product(r13, r13));
        let second = add6(add6(form_product(r21, r21), form_product(r22, r22)), form_product(r23, r23));
        let third = add6(add6(form_product(r11, r21), form_product(r12, r22)), form_product(r13, r23));
        let d = [
            first[0], first[1], first[2], first[3], first[4], first[5], second[3], second[4], second[5], third[1],
            third[2], third[3], third[4], third[5],
        ];

        // R13 = -R22 N(v) / L(v); substituting into the first row norm (made
        // homogeneous with the second) and clearing L² gives
        // d1 N² - M N L + Q L² = 0.
        let n = [d[11], d[12], d[13]];
        let l = [d[9], d[10]];
        let mq = [d[1], d[2]];
        let qq = [d[3] - d[6], d[4] - d[7], d[5] - d[8]];
        let n2: [T; 5] = mul_poly(n, n);
        let nl: [T; 4] = mul_poly(n, l);
        let nlm: [T; 5] = mul_poly(nl, mq);
        let l2: [T; 3] = mul_poly(l, l);
        let ql2: [T; 5] = mul_poly(qq, l2);
        let alpha = std::array::from_fn(|i| d[0] * n2[i] - nlm[i] + ql2[i]);

        Ok(Self { r23: [c1, c2], r11, r12, s, d, alpha })
    }

    /// Evaluates the quartic at `v`.
    pub fn quartic_at(&self, v: T) -> T {
        self.alpha.iter().fold(T::zero(), |acc, &a| acc * v + a)
    }
}

#[inline]
fn dot3<T: Real>(f: [T; 3], x: [T; 3]) -> T {
    f[0] * x[0] + f[1] * x[1] + f[2] * x[2]
}

/// Poses in the special frames, up to two per real quartic root.
pub fn solve_p1p2l_core<T: Real>(frame: &P1P2LFrame<T>) -> Result<Vec<Pose<T>>> {
    let k = P1P2LCoefficients::new(frame)?;
    let mut out = Vec::with_capacity(8);
    solve_core_into(frame, &k, &mut out)?;
    Ok(out)
}

fn solve_core_into<T: Real>(frame: &P1P2LFrame<T>, k: &P1P2LCoefficients<T>, out: &mut Vec<Pose<T>>) -> Result<()> {
    let d = &k.d;
    let [a0, a1, a2, a3, a4] = k.alpha;
    let q = frame.point_ray;
    let l_guard = T::lit(1e-10) * d[9].abs().max(d[10].abs());
    let defect_tol = T::tolerance(1e-9);
    for v in solve_quartic(a0, a1, a2, a3, a4)?.iter() {
        let radicand = (d[6] * v + d[7]) * v + d[8];
        if !(radicand > T::zero()) {
            continue;
        }
        let l = d[9] * v + d[10];
        if !(l.abs() > l_guard) {
            continue;
        }
        let n = (d[11] * v + d[12]) * v + d[13];
        let root = radicand.sqrt().recip();
        for r22 in [root, -root] {
            let r21 = v * r22;
            let r13 = -r22 * n / l;
            let x = [r13, r21, r22];
            let row1 = Vec3::new(dot3(k.r11, x), dot3(k.r12, x), r13);
            let row2 = Vec3::new(r21, r22, k.r23[0] * r21 + k.r23[1] * r22);
            let mut r = Mat3::from_rows(row1, row2, row1.cross(row2));
            // Each polar step squares the defect; candidates that are far
            // from a rotation are not solutions.
            for _ in 0..MAX_POLAR_STEPS {
                if r.orthogonality_defect() <= defect_tol {
                    break;
                }
                r = orthonormalize(&r);
            }
            if !(r.orthogonality_defect() <= defect_tol) {
                continue;
            }
            let s = k.s[0] * r21 + k.s[1] * r22;
            let t = q * (-s / q.y) + camera_center();
            out.push(Pose::new(r, t));
        }
    }
    Ok(())
}

fn solve_framed<T: Real>(
    pc: &PointCorrespondence<T>,
    lc1: &LineCorrespondence<T>,
    lc2: &LineCorrespondence<T>,
    stabilize: bool,
) -> Result<Vec<Pose<T>>> {
    let frame = build_p1p2l_frame(pc, lc1, lc2, stabilize)?;
    let framed = solve_p1p2l_core(&frame)?;
    Ok(framed.iter().map(|p| frame.unframe(p)).filter(|p| accept(p, &[pc], &[lc1, lc2])).collect())
}

/// Solves with an explicit choice of world framing.
pub fn solve_p1p2l_with_variant<T: Real>(
    pc: &PointCorrespondence<T>,
    lc1: &LineCorrespondence<T>,
    lc2: &LineCorrespondence<T>,
    variant: SolverVariant,
) -> Result<Vec<Pose<T>>> {
    match variant {
        SolverVariant::P1P2LStabilized => solve_framed(pc, lc1, lc2, true),
        SolverVariant::P1P2LUnstabilized => solve_framed(pc, lc1, lc2, false),
        _ => Err(PoseError::ContractViolation("not a one-point-two-line variant")),
    }
}

/// True when the point and the four line endpoints lie on a common plane,
/// relative to the extent of the scene.
pub fn is_coplanar<T: Real>(
    pc: &PointCorrespondence<T>,
    lc1: &LineCorrespondence<T>,
    lc2: &LineCorrespondence<T>,
) -> bool {
    let pts = [pc.world, lc1.world_a, lc1.world_b, lc2.world_a, lc2.world_b];
    let mut scale = T::zero();
    for a in &pts {
        for b in &pts {
            scale = scale.max((*a - *b).norm());
        }
    }
    if !(scale > T::zero()) {
        return true;
    }
    // Plane through the best-conditioned triple.
    let mut best = (T::zero(), Vec3::zeros(), pts[0]);
    for i in 0..5 {
        for j in i + 1..5 {
            for l in j + 1..5 {
                let n = (pts[j] - pts[i]).cross(pts[l] - pts[i]);
                let mag = n.norm();
                if mag > best.0 {
                    best = (mag, n, pts[i]);
                }
            }
        }
    }
    let (mag, n, origin) = best;
    if !(mag > T::zero()) {
        return true;
    }
    let n = n * mag.recip();
    let worst = pts.iter().fold(T::zero(), |acc, p| acc.max(n.dot(*p - origin).abs()));
    worst < T::lit(COPLANAR_THRESHOLD) * scale
}

/// Solves with stabilized framing, or unstabilized framing for planar scenes.
pub fn solve_p1p2l<T: Real>(
    pc: &PointCorrespondence<T>,
    lc1: &LineCorrespondence<T>,
    lc2: &LineCorrespondence<T>,
) -> Result<Solutions<T>> {
    let variant =
        if is_coplanar(pc, lc1, lc2) { SolverVariant::P1P2LUnstabilized } else { SolverVariant::P1P2LStabilized };
    Ok(Solutions { variant, poses: solve_p1p2l_with_variant(pc, lc1, lc2, variant)? })
}
