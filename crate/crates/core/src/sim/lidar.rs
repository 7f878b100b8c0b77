use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::ValidationError;
use crate::geometry::{ObstacleCloud, Point2, Pose2, Vector2};
use crate::sim::world::World;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LidarConfig {
    pub beam_count: usize,
    /// Beams without a hit inside this range report nothing.
    pub max_range: f64,
    /// Angular coverage centered on the robot heading, radians.
    pub span: f64,
    /// Standard deviation of additive range noise, meters. Zero disables it.
    pub noise_std: f64,
    pub noise_seed: u64,
}

impl Default for LidarConfig {
    fn default() -> Self {
        Self {
            beam_count: 720,
            max_range: 10.0,
            span: TAU,
            noise_std: 0.0,
            noise_seed: 0,
        }
    }
}

impl LidarConfig {
    pub fn validate(&self, comfort_radius: f64) -> Result<(), ValidationError> {
        if self.beam_count < 8 {
            return Err(ValidationError::new(
                "lidar_beams",
                format!("must be at least 8, got {}", self.beam_count),
            ));
        }
        if !(self.max_range.is_finite() && self.max_range > comfort_radius) {
            return Err(ValidationError::new(
                "lidar_range",
                format!(
                    "must exceed the comfort radius ({comfort_radius}), got {}",
                    self.max_range
                ),
            ));
        }
        if !(self.span > 0.0 && self.span <= TAU) {
            return Err(ValidationError::new(
                "lidar_span",
                format!("must lie in (0, 2pi], got {}", self.span),
            ));
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return Err(ValidationError::new(
                "noise_std",
                format!("must be non-negative, got {}", self.noise_std),
            ));
        }
        Ok(())
    }

    /// Absolute bearing of beam `i` for a robot with heading `yaw`.
    pub fn bearing(&self, yaw: f64, i: usize) -> f64 {
        if self.span >= TAU {
            yaw + i as f64 * TAU / self.beam_count as f64
        } else {
            yaw - self.span / 2.0 + i as f64 * self.span / (self.beam_count - 1) as f64
        }
    }
}

/// Distance along the ray `origin + s * dir` (unit `dir`) to the nearest wall.
fn cast(world: &World, origin: Point2, dir: Vector2) -> Option<f64> {
    let mut best: Option<f64> = None;
    for seg in world.segments() {
        let e = seg.b - seg.a;
        let denom = dir.cross(e);
        if denom == 0.0 {
            continue;
        }
        let ao = seg.a - origin;
        let s = ao.cross(e) / denom;
        let t = ao.cross(dir) / denom;
        if s >= 0.0 && (0.0..=1.0).contains(&t) && best.is_none_or(|b| s < b) {
            best = Some(s);
        }
    }
    best
}

/// Ideal first-hit scan, ordered by bearing.
pub fn raycast_scan(world: &World, pose: &Pose2, cfg: &LidarConfig) -> ObstacleCloud {
    scan_points(world, pose, cfg, |range| range)
}

/// Scan with additive Gaussian range noise drawn from `rng`.
pub fn raycast_scan_noisy<R: Rng>(world: &World, pose: &Pose2, cfg: &LidarConfig, rng: &mut R) -> ObstacleCloud {
    if cfg.noise_std == 0.0 {
        return raycast_scan(world, pose, cfg);
    }
    let normal = Normal::new(0.0, cfg.noise_std).expect("validated noise std");
    scan_points(world, pose, cfg, |range| (range + normal.sample(rng)).max(0.0))
}

fn scan_points(world: &World, pose: &Pose2, cfg: &LidarConfig, mut perturb: impl FnMut(f64) -> f64) -> ObstacleCloud {
    let mut points = Vec::with_capacity(cfg.beam_count);
    for i in 0..cfg.beam_count {
        let dir = Vector2::from_angle(cfg.bearing(pose.yaw, i));
        if let Some(range) = cast(world, pose.position, dir) {
            if range <= cfg.max_range {
                points.push(pose.position + dir * perturb(range));
            }
        }
    }
    ObstacleCloud::new(points).expect("ray hits are finite")
}
