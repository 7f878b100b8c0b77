//! Deterministic 2D world for closed-loop evaluation of the planner.

pub mod episode;
pub mod kinematics;
pub mod lidar;
pub mod world;

pub use episode::{
    run_episode, run_episode_with, CycleRecord, Episode, EpisodeOptions, Outcome, PlannerInput, RunMetrics, Scenario,
};
pub use kinematics::step_kinematics;
pub use lidar::{raycast_scan, raycast_scan_noisy, LidarConfig};
pub use world::{Segment, World};
