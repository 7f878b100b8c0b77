//! Closed-loop execution: scan, plan, command, integrate.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::control::{compute_command, ControllerParams, VelocityCommand};
use crate::error::ValidationError;
use crate::expansion::PlannerParams;
use crate::geometry::{angle_diff, pivot_angle, polyline_length, ObstacleCloud, Point2, Pose2};
use crate::heading::{plan_dual, GlobalPath, PathVariant};
use crate::search::CirclePath;
use crate::sim::kinematics::step_kinematics;
use crate::sim::lidar::{raycast_scan_noisy, LidarConfig};
use crate::sim::world::World;

/// Consecutive planner failures tolerated before declaring a deadlock, s.
pub const FAILURE_DEADLOCK_TIME: f64 = 5.0;
/// Window over which the robot must move at least [`STALL_DISPLACEMENT`], s.
pub const STALL_WINDOW: f64 = 10.0;
pub const STALL_DISPLACEMENT: f64 = 0.05;
/// Arc length ahead of the last progress point searched for the waypoint
/// nearest the robot, m.
pub const PROGRESS_WINDOW: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub world: World,
    pub start: Pose2,
    pub global_path: GlobalPath,
    pub goal_tolerance: f64,
    pub lidar: LidarConfig,
    pub dt: f64,
    pub max_sim_time: f64,
}

impl Scenario {
    pub fn validate(&self, params: &PlannerParams) -> Result<(), ValidationError> {
        if !self.start.is_finite() {
            return Err(ValidationError::new("start", "pose is not finite"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(ValidationError::new("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.max_sim_time.is_finite() && self.max_sim_time > 0.0) {
            return Err(ValidationError::new(
                "max_sim_time",
                format!("must be positive, got {}", self.max_sim_time),
            ));
        }
        if !(self.goal_tolerance.is_finite() && self.goal_tolerance > 0.0) {
            return Err(ValidationError::new(
                "goal_tolerance",
                format!("must be positive, got {}", self.goal_tolerance),
            ));
        }
        let offset = self.global_path.waypoints()[0].distance(self.start.position);
        if offset > 2.0 * params.comfort_radius {
            return Err(ValidationError::new(
                "global_path[0]",
                format!(
                    "starts {offset} m from the robot, more than twice the comfort radius ({})",
                    2.0 * params.comfort_radius
                ),
            ));
        }
        self.lidar.validate(params.comfort_radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Reached,
    Deadlock,
    Collision,
    Timeout,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Reached => "reached",
            Outcome::Deadlock => "deadlock",
            Outcome::Collision => "collision",
            Outcome::Timeout => "timeout",
        }
    }
}

/// What happened in one control cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub cycle: usize,
    pub time: f64,
    /// Wall-clock planning latency; the only non-deterministic field.
    pub compute_time: f64,
    pub pose: Pose2,
    /// Circles in the executed chain, zero when planning failed.
    pub chain_length: usize,
    pub local_path_length: Option<f64>,
    /// Distance from the robot center to the closest wall, capped at the
    /// LiDAR range.
    pub clearance: f64,
    pub v: f64,
    pub omega: f64,
    pub variant: Option<PathVariant>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub cycles: Vec<CycleRecord>,
    /// Mean over cycles that ran the planner, s.
    pub avg_computation_time: f64,
    /// Mean over cycles where planning succeeded, m.
    pub avg_local_path_length: f64,
    pub avg_clearance: f64,
    pub avg_forward_velocity: f64,
    /// Mean of |ω|.
    pub avg_angular_velocity: f64,
    pub path_length: f64,
    pub path_time: f64,
    pub outcome: Outcome,
}

impl RunMetrics {
    fn from_cycles(cycles: Vec<CycleRecord>, trajectory: &[Pose2], dt: f64, outcome: Outcome) -> Self {
        let mean = |xs: &mut dyn Iterator<Item = f64>| {
            let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
            if n == 0 {
                0.0
            } else {
                sum / n as f64
            }
        };
        Self {
            avg_computation_time: mean(&mut cycles.iter().map(|c| c.compute_time)),
            avg_local_path_length: mean(&mut cycles.iter().filter_map(|c| c.local_path_length)),
            avg_clearance: mean(&mut cycles.iter().map(|c| c.clearance)),
            avg_forward_velocity: mean(&mut cycles.iter().map(|c| c.v)),
            avg_angular_velocity: mean(&mut cycles.iter().map(|c| c.omega.abs())),
            path_length: polyline_length(trajectory.iter().map(|p| p.position)),
            path_time: (trajectory.len() - 1) as f64 * dt,
            outcome,
            cycles,
        }
    }

    /// Mean clearance over cycles at or after `from_time`.
    pub fn avg_clearance_after(&self, from_time: f64) -> f64 {
        let vals: Vec<f64> = self
            .cycles
            .iter()
            .filter(|c| c.time >= from_time)
            .map(|c| c.clearance)
            .collect();
        if vals.is_empty() {
            0.0
        } else {
            vals.iter().sum::<f64>() / vals.len() as f64
        }
    }
}

/// Everything the planner saw in one cycle, for offline replay.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannerInput {
    pub cloud: ObstacleCloud,
    pub pose: Pose2,
    pub previous: Option<CirclePath>,
    /// Global path from the robot's position onward, as handed to the planner.
    pub global: GlobalPath,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EpisodeOptions {
    pub record_inputs: bool,
}

#[derive(Debug, Clone)]
pub struct Episode {
    /// Start pose followed by the pose after every step.
    pub trajectory: Vec<Pose2>,
    /// Executed chain per cycle; `None` where planning failed.
    pub snapshots: Vec<Option<CirclePath>>,
    pub metrics: RunMetrics,
    /// Filled when [`EpisodeOptions::record_inputs`] is set.
    pub planner_inputs: Vec<PlannerInput>,
}

/// Reverse driving is allowed only when the root circle restricts turning
/// and the steering target lies behind the robot.
fn reverse_enabled(path: &CirclePath, target: Point2, pose: &Pose2, params: &PlannerParams) -> bool {
    if pivot_angle(path.root().radius, &params.footprint) >= PI {
        return false;
    }
    match (target - pose.position).angle() {
        Some(bearing) => angle_diff(bearing, pose.yaw).abs() > FRAC_PI_2,
        None => false,
    }
}

/// Steering target for the controller: the first child's center, or the
/// goal itself once it lies inside the root or first-child circle.
fn steering_target(path: &CirclePath, goal: Point2) -> Point2 {
    let child = path.first_child().expect("chains hold at least two circles");
    if path.root().center.distance(goal) <= path.root().radius || child.center.distance(goal) <= child.radius {
        goal
    } else {
        child.center
    }
}

pub fn run_episode(
    scenario: &Scenario,
    params: &PlannerParams,
    ctrl: &ControllerParams,
) -> Result<Episode, ValidationError> {
    run_episode_with(scenario, params, ctrl, EpisodeOptions::default())
}

pub fn run_episode_with(
    scenario: &Scenario,
    params: &PlannerParams,
    ctrl: &ControllerParams,
    options: EpisodeOptions,
) -> Result<Episode, ValidationError> {
    params.validate()?;
    ctrl.validate()?;
    scenario.validate(params)?;

    let dt = scenario.dt;
    let goal = scenario.global_path.goal();
    let stall_steps = (STALL_WINDOW / dt).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.lidar.noise_seed);

    let mut pose = scenario.start;
    let mut trajectory = vec![pose];
    let mut snapshots = Vec::new();
    let mut cycles = Vec::new();
    let mut planner_inputs = Vec::new();
    let mut previous: Option<CirclePath> = None;
    let mut failing_for = 0.0;
    let mut progress = scenario.global_path.advance_progress(0, pose.position, PROGRESS_WINDOW);

    let outcome = loop {
        let step = cycles.len();
        let time = step as f64 * dt;
        if pose.position.distance(goal) <= scenario.goal_tolerance {
            break Outcome::Reached;
        }
        if time >= scenario.max_sim_time {
            break Outcome::Timeout;
        }

        let cloud = raycast_scan_noisy(&scenario.world, &pose, &scenario.lidar, &mut rng);
        progress = scenario
            .global_path
            .advance_progress(progress, pose.position, PROGRESS_WINDOW);
        let global = scenario.global_path.remaining_path(progress, pose.position);
        let started = Instant::now();
        let planned = plan_dual(&cloud, &pose, previous.as_ref(), &global, params);
        let compute_time = started.elapsed().as_secs_f64();
        if options.record_inputs {
            planner_inputs.push(PlannerInput {
                cloud,
                pose,
                previous: previous.clone(),
                global,
            });
        }

        let (cmd, chosen, variant) = match planned {
            Ok(result) => {
                let variant = result.chosen;
                let path = result.into_chosen();
                let target = steering_target(&path, goal);
                let reverse = reverse_enabled(&path, target, &pose, params);
                let cmd = compute_command(
                    &pose,
                    target,
                    path.root().radius,
                    &params.footprint,
                    params,
                    ctrl,
                    reverse,
                );
                failing_for = 0.0;
                (cmd, Some(path), Some(variant))
            }
            Err(_) => {
                failing_for += dt;
                (VelocityCommand::STOP, None, None)
            }
        };

        cycles.push(CycleRecord {
            cycle: step,
            time,
            compute_time,
            pose,
            chain_length: chosen.as_ref().map_or(0, |p| p.len()),
            local_path_length: chosen.as_ref().map(|p| p.length()),
            clearance: scenario.world.clearance(pose.position).min(scenario.lidar.max_range),
            v: cmd.v,
            omega: cmd.omega,
            variant,
        });
        previous = chosen.clone();
        snapshots.push(chosen);

        pose = step_kinematics(&pose, &cmd, dt);
        trajectory.push(pose);

        if scenario.world.footprint_collides(&params.footprint, &pose) {
            break Outcome::Collision;
        }
        if failing_for >= FAILURE_DEADLOCK_TIME - 1e-9 {
            break Outcome::Deadlock;
        }
        let n = trajectory.len() - 1;
        if n >= stall_steps && pose.position.distance(trajectory[n - stall_steps].position) < STALL_DISPLACEMENT {
            break Outcome::Deadlock;
        }
    };

    let metrics = RunMetrics::from_cycles(cycles, &trajectory, dt, outcome);
    Ok(Episode {
        trajectory,
        snapshots,
        metrics,
        planner_inputs,
    })
}
