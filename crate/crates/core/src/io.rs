//! Plain-text correspondence files.
//!
//! ```text
//! minpose-corr v1
//! # comment
//! P px py pz bx by bz
//! L ax ay az bx by bz r1x r1y r1z r2x r2y r2z
//! ```
//!
//! Bearings must be unit length within 1e-9. Numbers are written with 17
//! significant digits, so a write/read round trip is exact. A comment of the
//! form `# ground-truth r11 r12 r13 r21 r22 r23 r31 r32 r33 t1 t2 t3` records
//! the pose the data was generated from; other readers may ignore it.

use std::fmt::{self, Write as _};

use crate::geometry::{LineCorrespondence, PointCorrespondence, Pose};
use crate::linalg::{Mat3, Vec3};

pub const HEADER: &str = "minpose-corr v1";
const GROUND_TRUTH_TAG: &str = "# ground-truth";
const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorrespondenceSet {
    pub points: Vec<PointCorrespondence<f64>>,
    pub lines: Vec<LineCorrespondence<f64>>,
    pub ground_truth: Option<Pose<f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// One-based line number.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn numbers(fields: &[&str], expected: usize) -> Result<Vec<f64>, String> {
    if fields.len() != expected {
        return Err(format!("expected {expected} numbers, found {}", fields.len()));
    }
    fields
        .iter()
        .map(|s| match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(format!("invalid number '{s}'")),
        })
        .collect()
}

fn vec3(v: &[f64]) -> Vec3<f64> {
    Vec3::new(v[0], v[1], v[2])
}

/// Accepts a near-unit ray, snapping it to unit length.
fn unit(v: &[f64]) -> Result<Vec3<f64>, String> {
    let r = vec3(v);
    let n = r.norm();
    if (n - 1.0).abs() > UNIT_TOLERANCE {
        return Err(format!("ray is not unit length (norm {n})"));
    }
    // Leave exactly representable unit vectors untouched for bit-exact round trips.
    Ok(if (n - 1.0).abs() > 1e-12 { r * n.recip() } else { r })
}

fn parse_record(content: &str, set: &mut CorrespondenceSet) -> Result<(), String> {
    let fields: Vec<&str> = content.split_whitespace().collect();
    match fields[0] {
        "P" => {
            let v = numbers(&fields[1..], 6)?;
            let pc = PointCorrespondence::new(vec3(&v[0..3]), unit(&v[3..6])?).map_err(|e| e.to_string())?;
            set.points.push(pc);
        }
        "L" => {
            let v = numbers(&fields[1..], 12)?;
            let lc = LineCorrespondence::new(vec3(&v[0..3]), vec3(&v[3..6]), unit(&v[6..9])?, unit(&v[9..12])?)
                .map_err(|e| e.to_string())?;
            set.lines.push(lc);
        }
        other => return Err(format!("unknown record type '{other}'")),
    }
    Ok(())
}

fn parse_ground_truth(rest: &str) -> Result<Pose<f64>, String> {
    let fields: Vec<&str> = rest.split_whitespace().collect();
    let v = numbers(&fields, 12)?;
    let r = Mat3::from_rows(vec3(&v[0..3]), vec3(&v[3..6]), vec3(&v[6..9]));
    Ok(Pose::new(r, vec3(&v[9..12])))
}

/// Parses a correspondence file; blank lines and comments may precede the header.
pub fn parse_correspondences(text: &str) -> Result<CorrespondenceSet, ParseError> {
    let mut set = CorrespondenceSet::default();
    let mut seen_header = false;
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last = line;
        let err = |message: String| ParseError { line, message };
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix(GROUND_TRUTH_TAG) {
            set.ground_truth = Some(parse_ground_truth(rest).map_err(err)?);
            continue;
        }
        let content = trimmed.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !seen_header {
            if content != HEADER {
                return Err(err(format!("expected header '{HEADER}'")));
            }
            seen_header = true;
            continue;
        }
        parse_record(content, &mut set).map_err(err)?;
    }
    if !seen_header {
        return Err(ParseError { line: last.max(1), message: format!("missing header '{HEADER}'") });
    }
    Ok(set)
}

fn push_vec(out: &mut String, v: Vec3<f64>) {
    for x in v.to_array() {
        // 17 significant digits round-trip every f64.
        let _ = write!(out, " {x:.16e}");
    }
}

pub fn format_correspondences(set: &CorrespondenceSet) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    if let Some(gt) = &set.ground_truth {
        out.push_str(GROUND_TRUTH_TAG);
        for row in 0..3 {
            push_vec(&mut out, gt.rotation.row(row));
        }
        push_vec(&mut out, gt.translation);
        out.push('\n');
    }
    for pc in &set.points {
        out.push('P');
        push_vec(&mut out, pc.world);
        push_vec(&mut out, pc.bearing);
        out.push('\n');
    }
    for lc in &set.lines {
        out.push('L');
        for v in [lc.world_a, lc.world_b, lc.ray_a, lc.ray_b] {
            push_vec(&mut out, v);
        }
        out.push('\n');
    }
    out
}
