//! Heading providers, the two-variant planning cycle and the rule that picks
//! between the resulting chains.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{PlanError, ValidationError};
use crate::expansion::PlannerParams;
use crate::geometry::{Circle, ObstacleCloud, Point2, Pose2, Vector2};
use crate::search::{find_chain, CirclePath};

/// Reference path supplied by a global planner.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalPath {
    waypoints: Vec<Point2>,
    /// Arc length from the first waypoint to each waypoint.
    cumulative: Vec<f64>,
}

impl GlobalPath {
    pub fn new(waypoints: Vec<Point2>) -> Result<Self, ValidationError> {
        if waypoints.len() < 2 {
            return Err(ValidationError::new(
                "global_path",
                format!("needs at least 2 waypoints, got {}", waypoints.len()),
            ));
        }
        if let Some(i) = waypoints.iter().position(|p| !p.is_finite()) {
            return Err(ValidationError::new(
                format!("global_path[{i}]"),
                "waypoint is not finite",
            ));
        }
        let mut cumulative = Vec::with_capacity(waypoints.len());
        cumulative.push(0.0);
        for (i, pair) in waypoints.windows(2).enumerate() {
            let step = pair[0].distance(pair[1]);
            if step <= 0.0 {
                return Err(ValidationError::new(
                    format!("global_path[{}]", i + 1),
                    "repeats the previous waypoint",
                ));
            }
            cumulative.push(cumulative[i] + step);
        }
        Ok(Self { waypoints, cumulative })
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn goal(&self) -> Point2 {
        *self.waypoints.last().expect("at least two waypoints")
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().expect("at least two waypoints")
    }

    /// Arc length from waypoint `index` to the end of the path.
    pub fn remaining_from(&self, index: usize) -> f64 {
        self.total_length() - self.cumulative[index]
    }

    /// Index of the waypoint closest to `p`; the earliest one on ties.
    pub fn nearest_waypoint(&self, p: Point2) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, w) in self.waypoints.iter().enumerate() {
            let d = w.distance_squared(p);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    /// Index of the waypoint closest to `p` among those at most `window`
    /// metres of arc length past waypoint `from`; the earliest one on ties.
    /// Never returns less than `from`.
    pub fn advance_progress(&self, from: usize, p: Point2, window: f64) -> usize {
        let from = from.min(self.waypoints.len() - 1);
        let limit = self.cumulative[from] + window;
        let mut best = from;
        let mut best_d = self.waypoints[from].distance_squared(p);
        for i in from + 1..self.waypoints.len() {
            if self.cumulative[i] > limit {
                break;
            }
            let d = self.waypoints[i].distance_squared(p);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    /// The path a global planner would hand over at `p`: `p` followed by the
    /// waypoints after `progress`.
    pub fn remaining_path(&self, progress: usize, p: Point2) -> GlobalPath {
        let mut waypoints = vec![p];
        waypoints.extend(self.waypoints.iter().skip(progress + 1).copied());
        if waypoints.len() < 2 {
            waypoints.push(self.goal());
        }
        waypoints.dedup_by(|b, a| a.distance(*b) <= 0.0);
        GlobalPath::new(waypoints).unwrap_or_else(|_| self.clone())
    }
}

/// Look-ahead heading from the previous cycle's chain: toward the circle two
/// positions ahead of `depth`. `None` when that circle does not exist.
pub fn consistent_heading(previous: Option<&CirclePath>, depth: usize, current: &Circle) -> Option<Vector2> {
    let ahead = previous?.circles.get(depth + 2)?;
    let h = ahead.center - current.center;
    (h.norm() > 0.0).then_some(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("look-ahead waypoint coincides with the circle center")]
pub struct DegenerateHeading;

/// Index of the first waypoint farther from the robot than the far edge of
/// `circle`; the last waypoint when none is.
pub fn lookahead_index(global: &GlobalPath, robot_pos: Point2, circle: &Circle) -> usize {
    let threshold = robot_pos.distance(circle.center) + circle.radius;
    global
        .waypoints
        .iter()
        .position(|p| p.distance(robot_pos) >= threshold)
        .unwrap_or(global.waypoints.len() - 1)
}

/// Heading from `circle` toward the global-path look-ahead point.
pub fn greedy_heading(global: &GlobalPath, robot_pos: Point2, circle: &Circle) -> Result<Vector2, DegenerateHeading> {
    let target = global.waypoints[lookahead_index(global, robot_pos, circle)];
    let h = target - circle.center;
    if h.norm() > 0.0 {
        Ok(h)
    } else {
        Err(DegenerateHeading)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathVariant {
    Consistent,
    Greedy,
}

impl PathVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            PathVariant::Consistent => "consistent",
            PathVariant::Greedy => "greedy",
        }
    }
}

/// Cost of following `path` and then the global path:
/// `(|P| + |P_end − p*|) · weight + |P_G(p*, end)|`, where `p*` is the
/// waypoint closest to the chain's end.
pub fn path_cost(path: &CirclePath, global: &GlobalPath, weight: f64) -> f64 {
    let end = path.end();
    let anchor = global.nearest_waypoint(end);
    let reconnect = end.distance(global.waypoints[anchor]);
    (path.length() + reconnect) * weight + global.remaining_from(anchor)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSelection {
    pub chosen: PathVariant,
    pub consistent_cost: f64,
    pub greedy_cost: f64,
}

/// Argmin of the weighted costs; ties go to the consistent path.
pub fn select_path(
    consistent: &CirclePath,
    greedy: &CirclePath,
    global: &GlobalPath,
    params: &PlannerParams,
) -> PathSelection {
    let consistent_cost = path_cost(consistent, global, params.consistent_weight);
    let greedy_cost = path_cost(greedy, global, 1.0);
    let chosen = if consistent_cost <= greedy_cost {
        PathVariant::Consistent
    } else {
        PathVariant::Greedy
    };
    PathSelection {
        chosen,
        consistent_cost,
        greedy_cost,
    }
}

/// Both planning variants of one cycle and the one picked.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPlanResult {
    pub consistent: Option<CirclePath>,
    pub greedy: Option<CirclePath>,
    pub chosen: PathVariant,
    pub consistent_cost: Option<f64>,
    pub greedy_cost: Option<f64>,
}

impl DualPlanResult {
    pub fn chosen_path(&self) -> &CirclePath {
        match self.chosen {
            PathVariant::Consistent => self.consistent.as_ref(),
            PathVariant::Greedy => self.greedy.as_ref(),
        }
        .expect("chosen variant always holds a path")
    }

    pub fn into_chosen(self) -> CirclePath {
        match self.chosen {
            PathVariant::Consistent => self.consistent,
            PathVariant::Greedy => self.greedy,
        }
        .expect("chosen variant always holds a path")
    }
}

/// One planning cycle: a chain steered by the previous chain (falling back
/// to the global path where it runs out) and a chain steered by the global
/// path alone, then the cheaper of the two.
pub fn plan_dual(
    cloud: &ObstacleCloud,
    robot_pose: &Pose2,
    previous: Option<&CirclePath>,
    global: &GlobalPath,
    params: &PlannerParams,
) -> Result<DualPlanResult, PlanError> {
    let robot = robot_pose.position;
    let greedy_provider = |_: usize, c: &Circle| greedy_heading(global, robot, c).ok();
    let greedy = find_chain(cloud, robot_pose, &greedy_provider, params);

    let Some(previous) = previous else {
        let path = greedy?;
        let cost = path_cost(&path, global, 1.0);
        return Ok(DualPlanResult {
            consistent: None,
            greedy: Some(path),
            chosen: PathVariant::Greedy,
            consistent_cost: None,
            greedy_cost: Some(cost),
        });
    };

    let consistent_provider = |depth: usize, c: &Circle| {
        consistent_heading(Some(previous), depth, c).or_else(|| greedy_heading(global, robot, c).ok())
    };
    let consistent = find_chain(cloud, robot_pose, &consistent_provider, params);

    match (consistent, greedy) {
        (Ok(pc), Ok(pg)) => {
            let sel = select_path(&pc, &pg, global, params);
            Ok(DualPlanResult {
                consistent: Some(pc),
                greedy: Some(pg),
                chosen: sel.chosen,
                consistent_cost: Some(sel.consistent_cost),
                greedy_cost: Some(sel.greedy_cost),
            })
        }
        (Ok(pc), Err(_)) => {
            let cost = path_cost(&pc, global, params.consistent_weight);
            Ok(DualPlanResult {
                consistent: Some(pc),
                greedy: None,
                chosen: PathVariant::Consistent,
                consistent_cost: Some(cost),
                greedy_cost: None,
            })
        }
        (Err(_), Ok(pg)) => {
            let cost = path_cost(&pg, global, 1.0);
            Ok(DualPlanResult {
                consistent: None,
                greedy: Some(pg),
                chosen: PathVariant::Greedy,
                consistent_cost: None,
                greedy_cost: Some(cost),
            })
        }
        (Err(err), Err(_)) => Err(err),
    }
}
