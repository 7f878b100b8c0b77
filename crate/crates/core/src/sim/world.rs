use serde::{Deserialize, Serialize};

use crate::error::ValidationError;
use crate::geometry::{point_segment_distance, Footprint, Point2, Pose2, Vector2};

/// A wall between two distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn distance_to(&self, p: Point2) -> f64 {
        point_segment_distance(p, self.a, self.b)
    }
}

/// Static obstacle geometry.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct World {
    segments: Vec<Segment>,
}

impl World {
    pub fn new(segments: Vec<Segment>) -> Result<Self, ValidationError> {
        for (i, s) in segments.iter().enumerate() {
            if !(s.a.is_finite() && s.b.is_finite()) {
                return Err(ValidationError::new(format!("segments[{i}]"), "endpoint is not finite"));
            }
            if s.a == s.b {
                return Err(ValidationError::new(format!("segments[{i}]"), "endpoints coincide"));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// The four walls of an axis-aligned rectangle.
    pub fn rectangle_segments(min: Point2, max: Point2) -> [Segment; 4] {
        let p00 = min;
        let p10 = Point2::new(max.x, min.y);
        let p11 = max;
        let p01 = Point2::new(min.x, max.y);
        [
            Segment::new(p00, p10),
            Segment::new(p10, p11),
            Segment::new(p11, p01),
            Segment::new(p01, p00),
        ]
    }

    /// Distance from `p` to the closest wall; infinite in an empty world.
    pub fn clearance(&self, p: Point2) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether the rectangular footprint at `pose` touches any wall.
    pub fn footprint_collides(&self, footprint: &Footprint, pose: &Pose2) -> bool {
        let hl = footprint.length() / 2.0;
        let hw = footprint.width() / 2.0;
        let to_local = |p: Point2| (p - pose.position).rotated(-pose.yaw);
        self.segments
            .iter()
            .any(|s| segment_hits_box(to_local(s.a), to_local(s.b), hl, hw))
    }
}

/// Liang–Barsky clip of segment `a`–`b` against `[-hx, hx] × [-hy, hy]`.
fn segment_hits_box(a: Vector2, b: Vector2, hx: f64, hy: f64) -> bool {
    let d = b - a;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-d.dx, a.dx + hx),
        (d.dx, hx - a.dx),
        (-d.dy, a.dy + hy),
        (d.dy, hy - a.dy),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}
