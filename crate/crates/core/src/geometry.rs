//! Planar primitives shared by every planner stage.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::index::PointGrid;

/// A point in the world frame, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point2) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn distance_squared(&self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Point at `distance` from `self` along the absolute direction `angle`.
    pub fn polar_offset(&self, angle: f64, distance: f64) -> Point2 {
        Point2::new(self.x + distance * angle.cos(), self.y + distance * angle.sin())
    }
}

impl Sub for Point2 {
    type Output = Vector2;

    fn sub(self, rhs: Point2) -> Vector2 {
        Vector2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vector2> for Point2 {
    type Output = Point2;

    fn add(self, rhs: Vector2) -> Point2 {
        Point2::new(self.x + rhs.dx, self.y + rhs.dy)
    }
}

/// A displacement, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector2 {
    pub dx: f64,
    pub dy: f64,
}

impl Vector2 {
    pub const fn new(dx: f64, dy: f64) -> Self {
        Self { dx, dy }
    }

    pub fn from_angle(angle: f64) -> Self {
        Self::new(angle.cos(), angle.sin())
    }

    pub fn norm(&self) -> f64 {
        self.dx.hypot(self.dy)
    }

    pub fn dot(&self, other: Vector2) -> f64 {
        self.dx * other.dx + self.dy * other.dy
    }

    pub fn cross(&self, other: Vector2) -> f64 {
        self.dx * other.dy - self.dy * other.dx
    }

    /// Direction in (−π, π]; `None` for the zero vector.
    pub fn angle(&self) -> Option<f64> {
        if self.dx == 0.0 && self.dy == 0.0 {
            None
        } else {
            Some(normalize_angle(self.dy.atan2(self.dx)))
        }
    }

    pub fn rotated(&self, angle: f64) -> Vector2 {
        let (s, c) = angle.sin_cos();
        Vector2::new(c * self.dx - s * self.dy, s * self.dx + c * self.dy)
    }
}

impl Add for Vector2 {
    type Output = Vector2;

    fn add(self, rhs: Vector2) -> Vector2 {
        Vector2::new(self.dx + rhs.dx, self.dy + rhs.dy)
    }
}

impl Sub for Vector2 {
    type Output = Vector2;

    fn sub(self, rhs: Vector2) -> Vector2 {
        Vector2::new(self.dx - rhs.dx, self.dy - rhs.dy)
    }
}

impl Mul<f64> for Vector2 {
    type Output = Vector2;

    fn mul(self, rhs: f64) -> Vector2 {
        Vector2::new(self.dx * rhs, self.dy * rhs)
    }
}

impl Neg for Vector2 {
    type Output = Vector2;

    fn neg(self) -> Vector2 {
        Vector2::new(-self.dx, -self.dy)
    }
}

/// Wraps an angle into (−π, π]. Angles already in range are returned untouched.
pub fn normalize_angle(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let wrapped = (angle + PI).rem_euclid(2.0 * PI) - PI;
    if wrapped <= -PI {
        wrapped + 2.0 * PI
    } else {
        wrapped
    }
}

/// Shortest signed difference `to − from`, in (−π, π].
pub fn angle_diff(to: f64, from: f64) -> f64 {
    normalize_angle(to - from)
}

/// Robot pose: position plus yaw in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose2 {
    pub position: Point2,
    pub yaw: f64,
}

impl Pose2 {
    pub fn new(position: Point2, yaw: f64) -> Self {
        Self {
            position,
            yaw: normalize_angle(yaw),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.yaw.is_finite()
    }
}

/// A disk of free space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Result<Self, GeometryError> {
        if !center.is_finite() {
            return Err(GeometryError::NonFinite("circle center"));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeometryError::InvalidRadius(radius));
        }
        Ok(Self { center, radius })
    }

    /// Strict containment with a 1e−9 m boundary allowance.
    pub fn strictly_contains(&self, p: Point2) -> bool {
        self.center.distance(p) < self.radius - 1e-9
    }
}

/// The obstacle points of one LiDAR scan.
///
/// Keeps the points in input order plus a uniform-grid index used to answer
/// nearest-distance queries without scanning every point.
#[derive(Debug, Clone, Default)]
pub struct ObstacleCloud {
    points: Vec<Point2>,
    grid: Option<PointGrid>,
}

impl ObstacleCloud {
    pub fn new(points: Vec<Point2>) -> Result<Self, GeometryError> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite("obstacle point"));
        }
        let grid = PointGrid::build(&points);
        Ok(Self { points, grid })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl PartialEq for ObstacleCloud {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

/// Distance from `p` to the closest obstacle point; `f64::INFINITY` for an
/// empty cloud.
pub fn nearest_obstacle_distance(cloud: &ObstacleCloud, p: Point2) -> f64 {
    match &cloud.grid {
        Some(grid) => grid.nearest_distance_squared(p).sqrt(),
        None => f64::INFINITY,
    }
}

/// Rectangular robot footprint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Footprint {
    width: f64,
    length: f64,
}

impl Footprint {
    pub fn new(width: f64, length: f64) -> Result<Self, GeometryError> {
        if !(width.is_finite() && length.is_finite() && width > 0.0 && width <= length) {
            return Err(GeometryError::InvalidFootprint { width, length });
        }
        Ok(Self { width, length })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn half_width(&self) -> f64 {
        self.width / 2.0
    }

    /// Radius of the circle circumscribing the rectangle.
    pub fn circumscribed_radius(&self) -> f64 {
        circumscribed_radius(self)
    }

    /// Corners of the footprint at `pose`, counter-clockwise from front-left.
    pub fn corners(&self, pose: &Pose2) -> [Point2; 4] {
        let hl = self.length / 2.0;
        let hw = self.width / 2.0;
        [(hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw)].map(|(x, y)| pose.position + Vector2::new(x, y).rotated(pose.yaw))
    }
}

pub fn circumscribed_radius(f: &Footprint) -> f64 {
    (f.width / 2.0).hypot(f.length / 2.0)
}

/// Half-width of the boundary arcs (front and back) where children of a
/// circle of `radius` may be placed.
///
/// The middle branch covers `width/2 ≤ radius ≤ R_circ`; above the
/// circumscribed radius the robot can turn in place and the whole boundary
/// is reachable.
pub fn pivot_angle(radius: f64, f: &Footprint) -> f64 {
    let circ = f.circumscribed_radius();
    let half_width = f.half_width();
    if radius > circ {
        PI
    } else if radius >= half_width {
        let ratio = ((2.0 * radius - f.width) / (2.0 * circ - f.width)).clamp(-1.0, 1.0);
        PI / 2.0 - ratio.acos()
    } else {
        0.0
    }
}

/// Whether `child` subtends the heading direction `h_theta` as seen from the
/// center of `parent`. Inclusive at the boundary, wrap-around safe.
pub fn heading_overlap(parent: &Circle, child: &Circle, h_theta: f64) -> bool {
    let Some(child_theta) = (child.center - parent.center).angle() else {
        return false;
    };
    let half_width = (child.radius / parent.radius).atan();
    angle_diff(h_theta, child_theta).abs() <= half_width
}

/// Unsigned angle between `child_center − parent_center` and `h`, in [0, π].
pub fn angular_deviation(parent_center: Point2, child_center: Point2, h: Vector2) -> f64 {
    let link = child_center - parent_center;
    let cos = link.dot(h) / (link.norm() * h.norm());
    cos.clamp(-1.0, 1.0).acos()
}

/// Euclidean distance from `p` to the segment `a`–`b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Length of the polyline through `points`.
pub fn polyline_length<I>(points: I) -> f64
where
    I: IntoIterator<Item = Point2>,
{
    let mut iter = points.into_iter();
    let Some(mut prev) = iter.next() else {
        return 0.0;
    };
    let mut total = 0.0;
    for p in iter {
        total += prev.distance(p);
        prev = p;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn table_footprint() -> Footprint {
        Footprint::new(0.75, 1.1).unwrap()
    }

    fn cloud(points: &[(f64, f64)]) -> ObstacleCloud {
        ObstacleCloud::new(points.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn nearest_distance_examples() {
        assert_eq!(nearest_obstacle_distance(&cloud(&[(2.0, 0.0)]), Point2::default()), 2.0);
        assert_eq!(
            nearest_obstacle_distance(&cloud(&[(3.0, 4.0), (1.0, 0.0)]), Point2::default()),
            1.0
        );
        assert_eq!(
            nearest_obstacle_distance(&ObstacleCloud::empty(), Point2::default()),
            f64::INFINITY
        );
    }

    #[test]
    fn cloud_rejects_nan() {
        assert!(ObstacleCloud::new(vec![Point2::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn circumscribed_radius_examples() {
        let expected = (0.375f64 * 0.375 + 0.55 * 0.55).sqrt();
        assert!((table_footprint().circumscribed_radius() - expected).abs() < 1e-15);
        assert!((expected - 0.665_676_347_784_717).abs() < 1e-10);
        let square = Footprint::new(2.0, 2.0).unwrap();
        assert!((square.circumscribed_radius() - SQRT_2).abs() < 1e-15);
        assert!(Footprint::new(2.0, 0.0).is_err());
        assert!(Footprint::new(0.0, 1.0).is_err());
    }

    #[test]
    fn pivot_angle_branches() {
        let f = table_footprint();
        assert_eq!(pivot_angle(f.half_width(), &f), 0.0);
        assert!((pivot_angle(f.circumscribed_radius(), &f) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(pivot_angle(f.circumscribed_radius() + 1e-6, &f), PI);
        assert_eq!(pivot_angle(0.1, &f), 0.0);
    }

    #[test]
    fn heading_overlap_examples() {
        let parent = Circle::new(Point2::default(), 1.0).unwrap();
        let child = Circle::new(Point2::new(1.0, 0.0), 1.0).unwrap();
        assert!(heading_overlap(&parent, &child, 0.0));
        assert!(heading_overlap(&parent, &child, FRAC_PI_4));
        assert!(!heading_overlap(&parent, &child, FRAC_PI_4 + 1e-12));
        let small = Circle::new(Point2::new(1.0, 0.0), 0.5).unwrap();
        assert!(!heading_overlap(&parent, &small, PI));
    }

    #[test]
    fn heading_overlap_across_seam() {
        let parent = Circle::new(Point2::default(), 1.0).unwrap();
        let child = Circle::new(Point2::new(-1.0, 1e-3), 0.5).unwrap();
        assert!(heading_overlap(&parent, &child, -PI + 0.1));
    }

    #[test]
    fn angular_deviation_examples() {
        let o = Point2::default();
        let h = Vector2::new(1.0, 0.0);
        assert_eq!(angular_deviation(o, Point2::new(2.0, 0.0), h), 0.0);
        assert!((angular_deviation(o, Point2::new(0.0, 3.0), h) - FRAC_PI_2).abs() < 1e-15);
        assert!((angular_deviation(o, Point2::new(1.0, 1.0), h) - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn normalize_angle_range() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert!((normalize_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((normalize_angle(-0.5 - 4.0 * PI) + 0.5).abs() < 1e-12);
        assert_eq!(normalize_angle(0.3), 0.3);
    }

    #[test]
    fn segment_distance() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(2.0, 0.0);
        assert_eq!(point_segment_distance(Point2::new(1.0, 1.0), a, b), 1.0);
        assert_eq!(point_segment_distance(Point2::new(3.0, 0.0), a, b), 1.0);
    }
}
