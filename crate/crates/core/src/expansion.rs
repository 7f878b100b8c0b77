//! Root-circle construction and child enumeration on a parent's boundary.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{PlanError, ValidationError};
use crate::geometry::{
    angle_diff, nearest_obstacle_distance, normalize_angle, pivot_angle, Circle, Footprint, ObstacleCloud, Point2,
};

/// Tunables of the circle-chain planner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerParams {
    pub footprint: Footprint,
    /// Upper bound on every circle radius, meters.
    pub comfort_radius: f64,
    /// Angular spacing of child centers on a parent boundary, radians.
    pub theta_step: f64,
    /// Number of circles in a complete chain, root included.
    pub chain_length: usize,
    /// Cost weight applied to the consistent path, in (0, 1].
    pub consistent_weight: f64,
}

impl Default for PlannerParams {
    fn default() -> Self {
        Self {
            footprint: Footprint::new(0.75, 1.1).expect("default footprint is valid"),
            comfort_radius: 1.5,
            theta_step: 0.06,
            chain_length: 5,
            consistent_weight: 0.7,
        }
    }
}

impl PlannerParams {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.comfort_radius.is_finite() && self.comfort_radius > self.footprint.half_width()) {
            return Err(ValidationError::new(
                "comfort_radius",
                format!(
                    "must exceed half the robot width ({}), got {}",
                    self.footprint.half_width(),
                    self.comfort_radius
                ),
            ));
        }
        if !(self.theta_step > 0.0 && self.theta_step < PI / 4.0) {
            return Err(ValidationError::new(
                "theta_step",
                format!("must lie in (0, pi/4), got {}", self.theta_step),
            ));
        }
        if self.chain_length < 2 {
            return Err(ValidationError::new(
                "chain_length",
                format!("must be at least 2, got {}", self.chain_length),
            ));
        }
        if !(self.consistent_weight > 0.0 && self.consistent_weight <= 1.0) {
            return Err(ValidationError::new(
                "consistent_weight",
                format!("must lie in (0, 1], got {}", self.consistent_weight),
            ));
        }
        Ok(())
    }
}

/// A child circle proposed on the boundary of its parent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateCircle {
    pub circle: Circle,
    /// Absolute angle of the center as seen from the parent center, in (−π, π].
    pub boundary_angle: f64,
    /// Chain index of the parent circle.
    pub parent_index: usize,
}

/// Circle centered on the robot, as large as the free space allows up to the
/// comfort radius.
pub fn make_root_circle(
    cloud: &ObstacleCloud,
    robot_center: Point2,
    params: &PlannerParams,
) -> Result<Circle, PlanError> {
    let clearance = nearest_obstacle_distance(cloud, robot_center);
    if clearance <= 0.0 {
        return Err(PlanError::RootBlocked);
    }
    Circle::new(robot_center, clearance.min(params.comfort_radius)).map_err(|_| PlanError::RootBlocked)
}

/// Boundary angles of `parent` that may host a child center.
///
/// The grid is `approach_angle + k * theta_step` over one revolution, kept
/// where the angle lies within the pivot angle of the approach axis (front)
/// or its reverse (back). When no grid angle falls inside the back arc the
/// exact reverse direction is added, so straight-back motion is always
/// available. The result is normalized to (−π, π] and sorted.
pub fn allowed_center_angles(parent: &Circle, approach_angle: f64, params: &PlannerParams) -> Vec<f64> {
    let pivot = pivot_angle(parent.radius, &params.footprint);
    let step = params.theta_step;
    let count = (2.0 * PI / step).ceil() as i64;
    let k_lo = -((count - 1) / 2);
    let k_hi = k_lo + count - 1;

    let mut angles = Vec::with_capacity(count as usize + 1);
    let mut back_covered = false;
    for k in k_lo..=k_hi {
        let offset = k as f64 * step;
        let front = normalize_angle(offset).abs();
        let back = angle_diff(offset, PI).abs();
        if back <= pivot {
            back_covered = true;
        }
        if front <= pivot || back <= pivot {
            angles.push(normalize_angle(approach_angle + offset));
        }
    }
    if !back_covered {
        angles.push(normalize_angle(approach_angle + PI));
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    angles
}

/// Candidate children of `parent`, sorted by boundary angle.
///
/// `occupied` is the chain accepted so far, root first and `parent` last.
/// Candidates whose raw clearance is below half the robot width are dropped,
/// as are candidates whose center falls strictly inside an occupied circle.
pub fn enumerate_children(
    parent: &Circle,
    approach_angle: f64,
    cloud: &ObstacleCloud,
    occupied: &[Circle],
    params: &PlannerParams,
) -> Vec<CandidateCircle> {
    let half_width = params.footprint.half_width();
    let parent_index = occupied.len().saturating_sub(1);
    allowed_center_angles(parent, approach_angle, params)
        .into_iter()
        .filter_map(|angle| {
            let center = parent.center.polar_offset(angle, parent.radius);
            let raw = nearest_obstacle_distance(cloud, center);
            if raw < half_width {
                return None;
            }
            if occupied.iter().any(|c| c.strictly_contains(center)) {
                return None;
            }
            Some(CandidateCircle {
                circle: Circle {
                    center,
                    radius: raw.min(params.comfort_radius),
                },
                boundary_angle: angle,
                parent_index,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PlannerParams {
        PlannerParams::default()
    }

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn default_params_are_valid() {
        params().validate().unwrap();
    }

    #[test]
    fn invalid_params_name_their_field() {
        let mut p = params();
        p.chain_length = 1;
        assert_eq!(p.validate().unwrap_err().field, "chain_length");
        let mut p = params();
        p.theta_step = 1.0;
        assert_eq!(p.validate().unwrap_err().field, "theta_step");
        let mut p = params();
        p.comfort_radius = 0.3;
        assert_eq!(p.validate().unwrap_err().field, "comfort_radius");
        let mut p = params();
        p.consistent_weight = 0.0;
        assert_eq!(p.validate().unwrap_err().field, "consistent_weight");
    }

    #[test]
    fn root_circle_clamps_and_passes_through() {
        let p = params();
        let root = make_root_circle(&ObstacleCloud::empty(), pt(0.0, 0.0), &p).unwrap();
        assert_eq!(root.radius, 1.5);

        let near = ObstacleCloud::new(vec![pt(0.9, 0.0)]).unwrap();
        assert_eq!(make_root_circle(&near, pt(0.0, 0.0), &p).unwrap().radius, 0.9);

        let far = ObstacleCloud::new(vec![pt(0.0, 2.0)]).unwrap();
        assert_eq!(make_root_circle(&far, pt(0.0, 0.0), &p).unwrap().radius, 1.5);
    }

    #[test]
    fn root_blocked_when_point_on_robot() {
        let cloud = ObstacleCloud::new(vec![pt(1.0, 1.0)]).unwrap();
        assert_eq!(
            make_root_circle(&cloud, pt(1.0, 1.0), &params()),
            Err(PlanError::RootBlocked)
        );
    }

    #[test]
    fn full_boundary_when_turning_in_place_is_free() {
        let p = params();
        let parent = Circle::new(pt(0.0, 0.0), 1.5).unwrap();
        let angles = allowed_center_angles(&parent, 0.3, &p);
        // ceil(2*pi / 0.06) = ceil(104.72) = 105
        assert_eq!(angles.len(), 105);
    }

    #[test]
    fn only_axis_angles_at_half_width() {
        let p = params();
        let parent = Circle::new(pt(0.0, 0.0), p.footprint.half_width()).unwrap();
        let angles = allowed_center_angles(&parent, 0.3, &p);
        assert_eq!(angles.len(), 2);
        assert!(angles.contains(&0.3));
        assert!(angles.iter().any(|a| (a - normalize_angle(0.3 + PI)).abs() < 1e-12));
    }

    #[test]
    fn quarter_arcs_tile_the_boundary_at_circumscribed_radius() {
        let p = params();
        let parent = Circle::new(pt(0.0, 0.0), p.footprint.circumscribed_radius()).unwrap();
        let angles = allowed_center_angles(&parent, -2.0, &p);
        let step = p.theta_step;
        let expected = (-52..=52)
            .filter(|k| {
                let off = *k as f64 * step;
                normalize_angle(off).abs() <= PI / 2.0 || angle_diff(off, PI).abs() <= PI / 2.0
            })
            .count();
        assert_eq!(expected, 105);
        assert_eq!(angles.len(), expected);
    }

    #[test]
    fn open_space_children_all_at_comfort() {
        let p = params();
        let parent = Circle::new(pt(0.0, 0.0), 1.5).unwrap();
        let kids = enumerate_children(&parent, 0.0, &ObstacleCloud::empty(), &[parent], &p);
        assert_eq!(kids.len(), 105);
        assert!(kids.iter().all(|c| c.circle.radius == 1.5 && c.parent_index == 0));
        assert!(kids.windows(2).all(|w| w[0].boundary_angle < w[1].boundary_angle));
    }

    #[test]
    fn wall_near_one_arc_discards_candidates() {
        let p = params();
        let parent = Circle::new(pt(0.0, 0.0), 1.5).unwrap();
        // wall at x = 1.7: points within 0.2 of the rightmost boundary point
        let wall: Vec<_> = (-40..=40).map(|i| pt(1.7, i as f64 * 0.05)).collect();
        let cloud = ObstacleCloud::new(wall).unwrap();
        let kids = enumerate_children(&parent, 0.0, &cloud, &[parent], &p);
        assert!(kids.iter().all(|c| c.boundary_angle.abs() > 0.1));
        assert!(kids.iter().all(|c| c.circle.radius >= 0.375));
        assert!(!kids.is_empty());
    }

    #[test]
    fn single_obstacle_radii_match_hand_distance() {
        let p = params();
        let parent = Circle::new(pt(0.0, 0.0), 1.0).unwrap();
        let obstacle = pt(2.0, 0.5);
        let cloud = ObstacleCloud::new(vec![obstacle]).unwrap();
        let kids = enumerate_children(&parent, 0.0, &cloud, &[parent], &p);
        for kid in &kids {
            let c = kid.circle.center;
            let d = ((c.x - 2.0).powi(2) + (c.y - 0.5).powi(2)).sqrt();
            assert_eq!(kid.circle.radius, d.min(1.5));
        }
    }

    #[test]
    fn centers_inside_earlier_circles_are_dropped() {
        let p = params();
        let grand = Circle::new(pt(-1.0, 0.0), 1.5).unwrap();
        let parent = Circle::new(pt(0.0, 0.0), 1.0).unwrap();
        let kids = enumerate_children(&parent, 0.0, &ObstacleCloud::empty(), &[grand, parent], &p);
        assert!(kids.iter().all(|k| !grand.strictly_contains(k.circle.center)));
        assert!(kids.iter().all(|k| k.parent_index == 1));
        assert!(kids.iter().any(|k| k.boundary_angle == 0.0));
        assert!(!kids.iter().any(|k| (k.boundary_angle.abs() - PI).abs() < 0.1));
    }
}
