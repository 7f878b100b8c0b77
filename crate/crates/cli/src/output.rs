//! Summary, per-cycle trace and SVG snapshot writers.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use fescr::sim::{CycleRecord, Episode, Scenario};
use fescr::{CirclePath, Footprint, Point2, Pose2};

/// Run-level metrics in the layout of the evaluation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: String,
    pub chain_length: usize,
    pub outcome: String,
    pub cycles: usize,
    pub planned_cycles: usize,
    pub average_computation_time_ms: f64,
    pub average_local_path_length_m: f64,
    pub average_distance_to_obstacle_m: f64,
    pub average_forward_velocity_mps: f64,
    pub average_angular_velocity_radps: f64,
    pub path_length_m: f64,
    pub path_time_s: f64,
}

impl Summary {
    pub fn from_episode(scenario: &str, chain_length: usize, episode: &Episode) -> Self {
        let m = &episode.metrics;
        Self {
            scenario: scenario.to_string(),
            chain_length,
            outcome: m.outcome.as_str().to_string(),
            cycles: m.cycles.len(),
            planned_cycles: m.cycles.iter().filter(|c| c.chain_length > 0).count(),
            average_computation_time_ms: m.avg_computation_time * 1e3,
            average_local_path_length_m: m.avg_local_path_length,
            average_distance_to_obstacle_m: m.avg_clearance,
            average_forward_velocity_mps: m.avg_forward_velocity,
            average_angular_velocity_radps: m.avg_angular_velocity,
            path_length_m: m.path_length,
            path_time_s: m.path_time,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("summary serializes")
    }
}

/// One line of the trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub cycle: usize,
    pub time: f64,
    /// Wall-clock planning latency in seconds; varies between runs.
    pub compute_time: f64,
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
    pub chain_length: usize,
    pub local_path_length: Option<f64>,
    pub clearance: f64,
    pub v: f64,
    pub omega: f64,
    pub variant: Option<String>,
}

impl From<&CycleRecord> for TraceRecord {
    fn from(c: &CycleRecord) -> Self {
        Self {
            cycle: c.cycle,
            time: c.time,
            compute_time: c.compute_time,
            x: c.pose.position.x,
            y: c.pose.position.y,
            yaw: c.pose.yaw,
            chain_length: c.chain_length,
            local_path_length: c.local_path_length,
            clearance: c.clearance,
            v: c.v,
            omega: c.omega,
            variant: c.variant.map(|v| v.as_str().to_string()),
        }
    }
}

/// JSON lines, one record per cycle.
pub fn trace_lines(episode: &Episode) -> String {
    let mut out = String::new();
    for cycle in &episode.metrics.cycles {
        out.push_str(&serde_json::to_string(&TraceRecord::from(cycle)).expect("record serializes"));
        out.push('\n');
    }
    out
}

struct Bounds {
    min: Point2,
    max: Point2,
}

impl Bounds {
    fn of(points: impl IntoIterator<Item = Point2>) -> Self {
        let mut b = Bounds {
            min: Point2::new(f64::INFINITY, f64::INFINITY),
            max: Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        };
        for p in points {
            b.min.x = b.min.x.min(p.x);
            b.min.y = b.min.y.min(p.y);
            b.max.x = b.max.x.max(p.x);
            b.max.y = b.max.y.max(p.y);
        }
        b
    }
}

fn points_attr(points: impl IntoIterator<Item = Point2>) -> String {
    let mut s = String::new();
    for (i, p) in points.into_iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", p.x, p.y);
    }
    s
}

/// SVG of the world, global path, trajectory so far, robot footprint and the
/// executed chain. The chain circles are the only `<circle>` elements.
pub fn render_snapshot(
    scenario: &Scenario,
    footprint: &Footprint,
    trajectory: &[Pose2],
    pose: &Pose2,
    chain: Option<&CirclePath>,
    title: &str,
) -> String {
    let mut all: Vec<Point2> = Vec::new();
    for s in scenario.world.segments() {
        all.push(s.a);
        all.push(s.b);
    }
    all.extend(scenario.global_path.waypoints().iter().copied());
    all.push(pose.position);
    let b = Bounds::of(all);
    let margin = 1.0;
    let (x0, y0) = (b.min.x - margin, b.min.y - margin);
    let (w, h) = (b.max.x - b.min.x + 2.0 * margin, b.max.y - b.min.y + 2.0 * margin);
    let stroke = (w.max(h) / 400.0).max(0.01);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {} {w} {h}" width="{}" height="{}">"#,
        -(y0 + h),
        (w * 40.0).round(),
        (h * 40.0).round()
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(title));
    // world y up
    let _ = writeln!(
        svg,
        r#"<g transform="scale(1,-1)" fill="none" stroke-width="{stroke}">"#
    );
    for s in scenario.world.segments() {
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            s.a.x, s.a.y, s.b.x, s.b.y
        );
    }
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" stroke="green" stroke-dasharray="{}"/>"#,
        points_attr(scenario.global_path.waypoints().iter().copied()),
        stroke * 4.0
    );
    if trajectory.len() > 1 {
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" stroke="blue"/>"#,
            points_attr(trajectory.iter().map(|p| p.position))
        );
    }
    if let Some(chain) = chain {
        for c in &chain.circles {
            let _ = writeln!(
                svg,
                r#"<circle cx="{}" cy="{}" r="{}" stroke="orange"/>"#,
                c.center.x, c.center.y, c.radius
            );
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" stroke="red"/>"#,
            points_attr(chain.centers())
        );
    }
    let _ = writeln!(
        svg,
        r#"<polygon points="{}" stroke="purple"/>"#,
        points_attr(footprint.corners(pose))
    );
    svg.push_str("</g>\n</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
