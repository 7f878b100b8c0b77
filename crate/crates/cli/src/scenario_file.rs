//! TOML encoding of a simulation scenario.
//!
//! ```toml
//! name = "demo"
//! goal_tolerance = 0.3
//! max_sim_time = 120.0
//! start = { x = 0.0, y = 0.0, yaw = 0.0 }
//! global_path = [[0.0, 0.0], [5.0, 0.0]]
//!
//! [[walls]]
//! name = "north"
//! from = [-1.0, 2.0]
//! to = [6.0, 2.0]
//!
//! [[boxes]]
//! name = "crate"
//! min = [2.0, -0.5]
//! max = [2.5, 0.5]
//! ```

use serde::{Deserialize, Serialize};

use fescr::sim::{Scenario, Segment, World};
use fescr::{GlobalPath, Point2, Pose2};

use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartPose {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub from: [f64; 2],
    pub to: [f64; 2],
}

/// Axis-aligned rectangle shorthand: expands to its four walls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub min: [f64; 2],
    pub max: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub goal_tolerance: f64,
    pub max_sim_time: f64,
    pub start: StartPose,
    pub global_path: Vec<[f64; 2]>,
    #[serde(default)]
    pub walls: Vec<WallSpec>,
    #[serde(default)]
    pub boxes: Vec<BoxSpec>,
}

fn point(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

impl ScenarioFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::parse(origin, e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Drops every wall and box called `name`; errors if none matched.
    pub fn without_obstacle(&self, name: &str) -> Result<Self, CliError> {
        let mut out = self.clone();
        out.walls.retain(|w| w.name.as_deref() != Some(name));
        out.boxes.retain(|b| b.name.as_deref() != Some(name));
        if out.walls.len() + out.boxes.len() == self.walls.len() + self.boxes.len() {
            return Err(CliError::usage(format!(
                "scenario `{}` has no obstacle named `{name}`",
                self.name
            )));
        }
        Ok(out)
    }

    pub fn segments(&self) -> Vec<Segment> {
        let mut segments: Vec<Segment> = self
            .walls
            .iter()
            .map(|w| Segment::new(point(w.from), point(w.to)))
            .collect();
        for b in &self.boxes {
            segments.extend(World::rectangle_segments(point(b.min), point(b.max)));
        }
        segments
    }

    /// Builds and validates the simulator scenario with the simulator knobs
    /// taken from `config`.
    pub fn to_scenario(&self, config: &ConfigFile, origin: &str) -> Result<Scenario, CliError> {
        let invalid = |field: String, reason: String| CliError::validation(origin, field, reason);
        for (i, b) in self.boxes.iter().enumerate() {
            if !(b.min[0] < b.max[0] && b.min[1] < b.max[1]) {
                return Err(invalid(
                    format!("boxes[{i}]"),
                    "min must be below max on both axes".into(),
                ));
            }
        }
        let walls = self.walls.len();
        let world = World::new(self.segments()).map_err(|e| {
            // segments[i] with i < walls maps back to walls[i]
            let index: Option<usize> = e
                .field
                .strip_prefix("segments[")
                .and_then(|s| s.strip_suffix(']'))
                .and_then(|s| s.parse().ok());
            match index {
                Some(i) if i < walls => invalid(format!("walls[{i}]"), e.reason),
                _ => invalid(e.field, e.reason),
            }
        })?;
        let global_path = GlobalPath::new(self.global_path.iter().copied().map(point).collect())
            .map_err(|e| invalid(e.field, e.reason))?;
        let scenario = Scenario {
            world,
            start: Pose2::new(Point2::new(self.start.x, self.start.y), self.start.yaw),
            global_path,
            goal_tolerance: self.goal_tolerance,
            lidar: config.lidar(),
            dt: config.dt,
            max_sim_time: self.max_sim_time,
        };
        let params = config.planner().map_err(|e| e.with_origin(origin))?;
        scenario.validate(&params).map_err(|e| invalid(e.field, e.reason))?;
        Ok(scenario)
    }
}
