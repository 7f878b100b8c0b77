use crate::control::VelocityCommand;
use crate::geometry::{Point2, Pose2};

/// Exact unicycle integration over `dt` with constant `(v, ω)`.
pub fn step_kinematics(pose: &Pose2, cmd: &VelocityCommand, dt: f64) -> Pose2 {
    let yaw = pose.yaw;
    let new_yaw = yaw + cmd.omega * dt;
    let p = pose.position;
    let position = if cmd.omega.abs() < 1e-9 {
        Point2::new(p.x + cmd.v * dt * yaw.cos(), p.y + cmd.v * dt * yaw.sin())
    } else {
        let r = cmd.v / cmd.omega;
        Point2::new(
            p.x + r * (new_yaw.sin() - yaw.sin()),
            p.y - r * (new_yaw.cos() - yaw.cos()),
        )
    };
    Pose2::new(position, new_yaw)
}
