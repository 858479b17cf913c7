//! Closed-form real roots of polynomials of degree at most four.
//!
//! The quartic is solved with Ferrari's method: the depressed quartic is split
//! into two quadratics using the largest real root of its resolvent cubic. Every
//! returned root gets one guarded Newton step on the original polynomial.
//! Repeated roots are not merged.

use crate::error::{PoseError, Result};
use crate::scalar::Real;

/// Leading coefficients smaller than this times the largest remaining
/// coefficient are treated as zero and the degree is dropped.
pub const DEGREE_DROP_RATIO: f64 = 1e-12;

/// Up to four real roots, stored inline, in ascending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyRoots<T> {
    roots: [T; 4],
    count: usize,
}

impl<T: Real> Default for PolyRoots<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> PolyRoots<T> {
    pub fn new() -> Self {
        Self { roots: [T::zero(); 4], count: 0 }
    }

    fn push(&mut self, r: T) {
        debug_assert!(self.count < 4);
        self.roots[self.count] = r;
        self.count += 1;
    }

    fn extend(&mut self, other: &PolyRoots<T>) {
        for &r in other.as_slice() {
            self.push(r);
        }
    }

    fn sort(&mut self) {
        self.roots[..self.count].sort_unstable_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    }

    pub fn as_slice(&self) -> &[T] {
        &self.roots[..self.count]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.as_slice().iter().copied()
    }
}

impl<'a, T: Real> IntoIterator for &'a PolyRoots<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;
    fn into_iter(self) -> Self::IntoIter {
        self.as_slice().iter()
    }
}

/// Evaluates `coeffs[0] x^n + ... + coeffs[n]` and its derivative by Horner.
#[inline]
pub fn eval_with_derivative<T: Real>(coeffs: &[T], x: T) -> (T, T) {
    let mut p = T::zero();
    let mut dp = T::zero();
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

#[inline]
fn newton_polish<T: Real>(coeffs: &[T], x: T) -> T {
    let (p, dp) = eval_with_derivative(coeffs, x);
    if dp == T::zero() || !dp.is_finite() {
        return x;
    }
    let next = x - p / dp;
    let (pn, _) = eval_with_derivative(coeffs, next);
    if next.is_finite() && pn.abs() <= p.abs() {
        next
    } else {
        x
    }
}

#[inline]
fn negligible<T: Real>(lead: T, rest: &[T]) -> bool {
    let scale = rest.iter().fold(T::zero(), |m, c| m.max(c.abs()));
    lead.abs() < T::lit(DEGREE_DROP_RATIO) * scale
}

/// Real roots of `a x² + b x + c`.
///
/// A negligible `a` reduces to the linear equation; all-zero coefficients are
/// rejected as [`PoseError::DegenerateInput`].
pub fn solve_quadratic<T: Real>(a: T, b: T, c: T) -> Result<PolyRoots<T>> {
    let mut out = PolyRoots::new();
    if a == T::zero() && b == T::zero() && c == T::zero() {
        return Err(PoseError::DegenerateInput("all polynomial coefficients are zero"));
    }
    if a == T::zero() || negligible(a, &[b, c]) {
        if b != T::zero() && !negligible(b, &[c]) {
            out.push(-c / b);
        }
        return Ok(out);
    }
    let disc = b * b - T::lit(4.0) * a * c;
    if disc < T::zero() {
        return Ok(out);
    }
    let sq = disc.sqrt();
    let q = -T::lit(0.5) * (b + sq.copysign(b));
    if q == T::zero() {
        // b = 0 and c = 0: double root at zero.
        out.push(T::zero());
        out.push(T::zero());
        return Ok(out);
    }
    let (x1, x2) = (q / a, c / q);
    out.push(x1.min(x2));
    out.push(x1.max(x2));
    Ok(out)
}

/// Real roots (one or three) of `a x³ + b x² + c x + d`, each Newton-polished.
///
/// A negligible leading coefficient delegates to [`solve_quadratic`].
pub fn solve_cubic<T: Real>(a: T, b: T, c: T, d: T) -> Result<PolyRoots<T>> {
    if a == T::zero() || negligible(a, &[b, c, d]) {
        return solve_quadratic(b, c, d);
    }
    let inv = a.recip();
    Ok(solve_monic_cubic(b * inv, c * inv, d * inv))
}

/// Real roots of `x³ + ca x² + cb x + cc`.
fn solve_monic_cubic<T: Real>(ca: T, cb: T, cc: T) -> PolyRoots<T> {
    let monic = [T::one(), ca, cb, cc];
    let third = T::lit(1.0 / 3.0);
    let shift = ca * third;
    let p = cb - ca * ca * third;
    let q = T::lit(2.0 / 27.0) * ca * ca * ca - ca * cb * third + cc;
    let half_q = q * T::lit(0.5);
    let p3 = p * third;
    let disc = half_q * half_q + p3 * p3 * p3;

    let mut out = PolyRoots::new();
    if disc > T::zero() {
        let u = (-half_q - disc.sqrt().copysign(q)).cbrt();
        let t = if u == T::zero() { T::zero() } else { u - p3 / u };
        out.push(t - shift);
    } else if p == T::zero() {
        out.push(-shift);
        out.push(-shift);
        out.push(-shift);
    } else {
        let m = T::lit(2.0) * (-p3).sqrt();
        let cos_arg = (T::lit(3.0) * q / (p * m)).max(-T::one()).min(T::one());
        let theta = cos_arg.acos() * third;
        let step = T::lit(2.0 * std::f64::consts::PI / 3.0);
        for k in 0..3 {
            out.push(m * (theta - step * T::lit(k as f64)).cos() - shift);
        }
    }
    for i in 0..out.count {
        out.roots[i] = newton_polish(&monic, out.roots[i]);
    }
    out.sort();
    out
}

/// Real roots of `a x⁴ + b x³ + c x² + d x + e` by Ferrari's method.
///
/// A negligible leading coefficient delegates to [`solve_cubic`].
pub fn solve_quartic<T: Real>(a: T, b: T, c: T, d: T, e: T) -> Result<PolyRoots<T>> {
    if a == T::zero() || negligible(a, &[b, c, d, e]) {
        return solve_cubic(b, c, d, e);
    }
    let inv = a.recip();
    let (b, c, d, e) = (b * inv, c * inv, d * inv, e * inv);
    let monic = [T::one(), b, c, d, e];

    // x = y - b/4 gives y⁴ + p y² + q y + r.
    let shift = b * T::lit(0.25);
    let b2 = b * b;
    let p = c - T::lit(3.0 / 8.0) * b2;
    let q = d - T::lit(0.5) * b * c + T::lit(0.125) * b2 * b;
    let r = e - T::lit(0.25) * b * d + T::lit(1.0 / 16.0) * b2 * c - T::lit(3.0 / 256.0) * b2 * b2;

    // Resolvent m³ + p m² + (p²/4 - r) m - q²/8 = 0 always has a root m >= 0.
    let resolvent = solve_monic_cubic(p, T::lit(0.25) * p * p - r, -T::lit(0.125) * q * q);
    let m = resolvent.iter().fold(T::neg_infinity(), T::max);

    let mut out = PolyRoots::new();
    let two_m = T::lit(2.0) * m;
    if m > T::zero() && two_m.is_finite() {
        // (y² + p/2 + m)² = 2m (y - q/(4m))² splits into two quadratics
        // y² ± s y + g with s = sqrt(2m) and g1 g2 = r.
        let s = two_m.sqrt();
        let mid = T::lit(0.5) * p + m;
        let delta = q / (T::lit(2.0) * s);
        let (mut g_plus, mut g_minus) = (mid - delta, mid + delta);
        if g_plus.abs() > g_minus.abs() {
            if g_plus != T::zero() {
                g_minus = r / g_plus;
            }
        } else if g_minus != T::zero() {
            g_plus = r / g_minus;
        }
        out.extend(&solve_quadratic(T::one(), s, g_plus)?);
        out.extend(&solve_quadratic(T::one(), -s, g_minus)?);
    } else {
        // q = 0: biquadratic in z = y².
        for z in solve_quadratic(T::one(), p, r)?.iter() {
            if z >= T::zero() {
                let y = z.sqrt();
                out.push(-y);
                out.push(y);
            }
        }
    }
    for i in 0..out.count {
        out.roots[i] = newton_polish(&monic, out.roots[i] - shift);
    }
    out.sort();
    Ok(out)
}
