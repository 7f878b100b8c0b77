//! Local path planning with chains of obstacle-free circles.
//!
//! Starting from a disk centered on the robot, the planner grows a chain of
//! circles over a LiDAR point cloud, each new circle centered on the boundary
//! of the previous one and as large as the free space allows (up to a comfort
//! radius). Children are ranked by whether they cover the heading toward the
//! global path, and a dead end removes its circle and resumes from the parent.
//! Two chains are planned per cycle, one steered by the previous chain and one
//! by the global path alone, and a weighted cost picks between them. A small
//! controller turns the first link of the chosen chain into `(v, ω)`.
//!
//! [`sim`] closes the loop with a raycast LiDAR and unicycle kinematics.

pub mod control;
pub mod error;
pub mod expansion;
pub mod geometry;
pub mod heading;
mod index;
pub mod search;
pub mod sim;

pub use control::{compute_command, scaling_factor, ControllerParams, ScaleNormalization, VelocityCommand};
pub use error::{GeometryError, PlanError, ValidationError};
pub use expansion::{allowed_center_angles, enumerate_children, make_root_circle, CandidateCircle, PlannerParams};
pub use geometry::{
    angular_deviation, circumscribed_radius, heading_overlap, nearest_obstacle_distance, pivot_angle, Circle,
    Footprint, ObstacleCloud, Point2, Pose2, Vector2,
};
pub use heading::{
    consistent_heading, greedy_heading, plan_dual, select_path, DualPlanResult, GlobalPath, PathSelection, PathVariant,
};
pub use search::{find_chain, partition_children, select_child, CirclePath, HeadingProvider, Partition};
