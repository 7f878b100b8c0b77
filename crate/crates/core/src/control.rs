//! Velocity commands from the first two circles of the chosen chain.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::ValidationError;
use crate::expansion::PlannerParams;
use crate::geometry::{angle_diff, normalize_angle, Footprint, Point2, Pose2};

/// How the first-circle radius is normalized into the speed scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleNormalization {
    /// `(2r − w) / (R_comfort − w)`, clamped to [0, 1].
    #[default]
    Comfort,
    /// `(2r − w) / (2 R_comfort − w)`; spans [0, 1] exactly over the valid
    /// radius range. Not the default.
    DoubleComfort,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerParams {
    /// Proportional yaw gain, 1/s.
    pub k_p: f64,
    /// Yaw-error gate at the smallest first circle, radians.
    pub eps_min: f64,
    /// Yaw-error gate at the largest first circle, radians.
    pub eps_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub omega_max: f64,
    pub scale_normalization: ScaleNormalization,
}

impl Default for ControllerParams {
    fn default() -> Self {
        Self {
            k_p: 2.0,
            eps_min: 0.2,
            eps_max: 0.4,
            v_min: 0.2,
            v_max: 1.0,
            omega_max: 0.8,
            scale_normalization: ScaleNormalization::Comfort,
        }
    }
}

impl ControllerParams {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.k_p.is_finite() && self.k_p > 0.0) {
            return Err(ValidationError::new(
                "k_p",
                format!("must be positive, got {}", self.k_p),
            ));
        }
        if !(self.eps_min.is_finite() && self.eps_max.is_finite() && self.eps_min < self.eps_max) {
            return Err(ValidationError::new(
                "eps_min",
                format!("must be below eps_max ({}), got {}", self.eps_max, self.eps_min),
            ));
        }
        if !(self.v_min > 0.0 && self.v_max.is_finite() && self.v_min < self.v_max) {
            return Err(ValidationError::new(
                "v_min",
                format!("requires 0 < v_min < v_max ({}), got {}", self.v_max, self.v_min),
            ));
        }
        if !(self.omega_max.is_finite() && self.omega_max > 0.0) {
            return Err(ValidationError::new(
                "omega_max",
                format!("must be positive, got {}", self.omega_max),
            ));
        }
        Ok(())
    }
}

/// Signed forward speed (negative reverses) and yaw rate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VelocityCommand {
    pub v: f64,
    pub omega: f64,
}

impl VelocityCommand {
    pub const STOP: VelocityCommand = VelocityCommand { v: 0.0, omega: 0.0 };
}

/// Normalized size of the first circle, in [0, 1].
pub fn scaling_factor(
    first_radius: f64,
    footprint: &Footprint,
    params: &PlannerParams,
    normalization: ScaleNormalization,
) -> f64 {
    let width = footprint.width();
    let denom = match normalization {
        ScaleNormalization::Comfort => params.comfort_radius - width,
        ScaleNormalization::DoubleComfort => 2.0 * params.comfort_radius - width,
    };
    ((2.0 * first_radius - width) / denom).clamp(0.0, 1.0)
}

/// Yaw-error gate and cruise speed for scale `s`.
pub fn interpolate_limits(s: f64, ctrl: &ControllerParams) -> (f64, f64) {
    let eps = ctrl.eps_min + s * (ctrl.eps_max - ctrl.eps_min);
    let v = ctrl.v_min + s * (ctrl.v_max - ctrl.v_min);
    (eps, v)
}

/// Proportional yaw control toward `target` with forward speed gated on the
/// yaw error. With `reverse` set and the target behind the robot, the robot
/// backs toward it instead of turning around.
#[allow(clippy::too_many_arguments)]
pub fn compute_command(
    pose: &Pose2,
    target: Point2,
    first_radius: f64,
    footprint: &Footprint,
    planner: &PlannerParams,
    ctrl: &ControllerParams,
    reverse: bool,
) -> VelocityCommand {
    let Some(mut desired) = (target - pose.position).angle() else {
        return VelocityCommand::STOP;
    };
    let mut direction = 1.0;
    if reverse && angle_diff(desired, pose.yaw).abs() > FRAC_PI_2 {
        desired = normalize_angle(desired + PI);
        direction = -1.0;
    }
    let yaw_error = angle_diff(desired, pose.yaw);
    let omega = (ctrl.k_p * yaw_error).clamp(-ctrl.omega_max, ctrl.omega_max);
    let s = scaling_factor(first_radius, footprint, planner, ctrl.scale_normalization);
    let (eps, speed) = interpolate_limits(s, ctrl);
    let v = if yaw_error.abs() > eps { 0.0 } else { direction * speed };
    VelocityCommand { v, omega }
}
