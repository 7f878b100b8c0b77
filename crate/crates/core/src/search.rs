//! Greedy depth-first chain construction with backtracking.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::expansion::{enumerate_children, make_root_circle, CandidateCircle, PlannerParams};
use crate::geometry::{angle_diff, angular_deviation, heading_overlap, Circle, ObstacleCloud, Point2, Pose2, Vector2};

/// Hard cap on child selections per search.
pub const NODE_BUDGET: usize = 10_000;

const RADIUS_TOLERANCE: f64 = 1e-9;

/// An ordered chain of circles, root first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirclePath {
    pub circles: Vec<Circle>,
    /// Direction each circle was entered from: the robot yaw for the root,
    /// the link direction from the previous center otherwise.
    pub approach_angles: Vec<f64>,
}

impl CirclePath {
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn root(&self) -> &Circle {
        &self.circles[0]
    }

    /// The circle the controller steers toward.
    pub fn first_child(&self) -> Option<&Circle> {
        self.circles.get(1)
    }

    pub fn end(&self) -> Point2 {
        self.circles.last().expect("non-empty path").center
    }

    /// Length of the polyline through the circle centers. Each link spans
    /// exactly its parent's radius, so this sums the radii of all but the
    /// last circle rather than re-measuring rounded centers.
    pub fn length(&self) -> f64 {
        let links = self.circles.len().saturating_sub(1);
        self.circles[..links].iter().map(|c| c.radius).sum()
    }

    pub fn centers(&self) -> impl Iterator<Item = Point2> + '_ {
        self.circles.iter().map(|c| c.center)
    }
}

/// Candidates split by priority.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Partition {
    /// Comfort-sized and overlapping the heading.
    pub q1: Vec<CandidateCircle>,
    /// Smaller than comfort, overlapping the heading.
    pub q2: Vec<CandidateCircle>,
    /// Not overlapping the heading.
    pub q3: Vec<CandidateCircle>,
}

pub fn partition_children(
    children: &[CandidateCircle],
    parent: &Circle,
    h: Vector2,
    params: &PlannerParams,
) -> Partition {
    let h_theta = h.angle().unwrap_or(0.0);
    let mut out = Partition::default();
    for child in children {
        if !heading_overlap(parent, &child.circle, h_theta) {
            out.q3.push(*child);
        } else if (child.circle.radius - params.comfort_radius).abs() <= RADIUS_TOLERANCE {
            out.q1.push(*child);
        } else {
            out.q2.push(*child);
        }
    }
    out
}

fn tie_break(a: &CandidateCircle, b: &CandidateCircle, h_theta: f64) -> Ordering {
    let da = angle_diff(a.boundary_angle, h_theta).abs();
    let db = angle_diff(b.boundary_angle, h_theta).abs();
    da.total_cmp(&db)
        .then_with(|| a.boundary_angle.total_cmp(&b.boundary_angle))
}

/// Picks from the first non-empty set: smallest deviation from `h` in Q1 and
/// Q3, largest radius in Q2.
pub fn select_child(
    q1: &[CandidateCircle],
    q2: &[CandidateCircle],
    q3: &[CandidateCircle],
    parent: &Circle,
    h: Vector2,
) -> Option<CandidateCircle> {
    let h_theta = h.angle().unwrap_or(0.0);
    let deviation = |c: &CandidateCircle| angular_deviation(parent.center, c.circle.center, h);
    let by_deviation = |set: &[CandidateCircle]| {
        set.iter()
            .min_by(|a, b| {
                deviation(a)
                    .total_cmp(&deviation(b))
                    .then_with(|| tie_break(a, b, h_theta))
            })
            .copied()
    };
    if !q1.is_empty() {
        return by_deviation(q1);
    }
    if !q2.is_empty() {
        return q2
            .iter()
            .min_by(|a, b| {
                b.circle
                    .radius
                    .total_cmp(&a.circle.radius)
                    .then_with(|| tie_break(a, b, h_theta))
            })
            .copied();
    }
    by_deviation(q3)
}

/// Supplies the heading vector used to rank the children of the circle at
/// `depth` (root = 0). `None` means "no preference": the approach direction
/// is used instead.
pub trait HeadingProvider {
    fn heading(&self, depth: usize, circle: &Circle) -> Option<Vector2>;
}

impl<F> HeadingProvider for F
where
    F: Fn(usize, &Circle) -> Option<Vector2>,
{
    fn heading(&self, depth: usize, circle: &Circle) -> Option<Vector2> {
        self(depth, circle)
    }
}

/// Backtracking bookkeeping for one circle on the search stack.
#[derive(Debug)]
struct SearchNode {
    circle: Circle,
    approach: f64,
    heading: Vector2,
    children: Vec<CandidateCircle>,
    tried: Vec<bool>,
}

/// Outcome details of a successful search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    pub expansions: usize,
    pub backtracks: usize,
}

/// Builds the first chain of `params.chain_length` circles found by greedy
/// depth-first search. A node with no selectable child is removed and the
/// search resumes from its parent with the remaining children.
pub fn find_chain<H: HeadingProvider + ?Sized>(
    cloud: &ObstacleCloud,
    robot_pose: &Pose2,
    headings: &H,
    params: &PlannerParams,
) -> Result<CirclePath, PlanError> {
    find_chain_with_stats(cloud, robot_pose, headings, params).map(|(path, _)| path)
}

pub fn find_chain_with_stats<H: HeadingProvider + ?Sized>(
    cloud: &ObstacleCloud,
    robot_pose: &Pose2,
    headings: &H,
    params: &PlannerParams,
) -> Result<(CirclePath, SearchStats), PlanError> {
    let root = make_root_circle(cloud, robot_pose.position, params)?;
    let target = params.chain_length;
    let mut stack: Vec<SearchNode> = Vec::with_capacity(target);
    let mut chain: Vec<Circle> = Vec::with_capacity(target);
    let mut expansions = 0usize;
    let mut backtracks = 0usize;

    let open_node = |circle: Circle, approach: f64, chain: &[Circle]| {
        let depth = chain.len() - 1;
        let heading = headings
            .heading(depth, &circle)
            .filter(|h| h.norm() > 0.0 && h.dx.is_finite() && h.dy.is_finite())
            .unwrap_or_else(|| Vector2::from_angle(approach));
        let children = if chain.len() < target {
            enumerate_children(&circle, approach, cloud, chain, params)
        } else {
            Vec::new()
        };
        let tried = vec![false; children.len()];
        SearchNode {
            circle,
            approach,
            heading,
            children,
            tried,
        }
    };

    chain.push(root);
    stack.push(open_node(root, robot_pose.yaw, &chain));

    while chain.len() < target {
        if expansions >= NODE_BUDGET {
            return Err(PlanError::NoPathFound {
                chain_length: target,
                expansions,
            });
        }
        expansions += 1;

        let node = stack.last_mut().expect("stack holds at least the root");
        let open: Vec<CandidateCircle> = node
            .children
            .iter()
            .zip(&node.tried)
            .filter(|(_, tried)| !**tried)
            .map(|(c, _)| *c)
            .collect();
        let parts = partition_children(&open, &node.circle, node.heading, params);
        match select_child(&parts.q1, &parts.q2, &parts.q3, &node.circle, node.heading) {
            Some(child) => {
                let slot = node
                    .children
                    .iter()
                    .position(|c| c.boundary_angle == child.boundary_angle)
                    .expect("selected child comes from this node");
                node.tried[slot] = true;
                chain.push(child.circle);
                let next = open_node(child.circle, child.boundary_angle, &chain);
                stack.push(next);
            }
            None => {
                stack.pop();
                chain.pop();
                backtracks += 1;
                if stack.is_empty() {
                    return Err(PlanError::NoPathFound {
                        chain_length: target,
                        expansions,
                    });
                }
            }
        }
    }

    let path = CirclePath {
        circles: chain,
        approach_angles: stack.iter().map(|n| n.approach).collect(),
    };
    Ok((path, SearchStats { expansions, backtracks }))
}
