use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fescr::geometry::{normalize_angle, polyline_length};
use fescr::heading::{lookahead_index, path_cost};
use fescr::sim::{raycast_scan, LidarConfig, Segment, World};
use fescr::{
    allowed_center_angles, enumerate_children, find_chain, greedy_heading, heading_overlap, nearest_obstacle_distance,
    partition_children, plan_dual, select_path, Circle, CirclePath, GlobalPath, ObstacleCloud, PathVariant,
    PlannerParams, Point2, Pose2, Vector2,
};

fn point(range: f64) -> impl Strategy<Value = Point2> {
    (-range..range, -range..range).prop_map(|(x, y)| Point2::new(x, y))
}

fn params_with(chain_length: usize) -> PlannerParams {
    PlannerParams {
        chain_length,
        ..PlannerParams::default()
    }
}

/// Boxes inside a square room, plus a robot pose with enough clearance.
fn random_world(seed: u64) -> (World, Pose2, GlobalPath) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut segments: Vec<Segment> = World::rectangle_segments(Point2::new(-8.0, -8.0), Point2::new(8.0, 8.0)).to_vec();
    for _ in 0..rng.gen_range(2..8) {
        let x = rng.gen_range(-6.0..5.0);
        let y = rng.gen_range(-6.0..5.0);
        let w = rng.gen_range(0.2..2.0);
        let h = rng.gen_range(0.2..2.0);
        segments.extend(World::rectangle_segments(Point2::new(x, y), Point2::new(x + w, y + h)));
    }
    let world = World::new(segments).unwrap();
    let start = loop {
        let p = Point2::new(rng.gen_range(-7.0..7.0), rng.gen_range(-7.0..7.0));
        if world.clearance(p) >= 0.5 {
            break p;
        }
    };
    let goal = loop {
        let p = Point2::new(rng.gen_range(-7.0..7.0), rng.gen_range(-7.0..7.0));
        if p.distance(start) > 3.0 {
            break p;
        }
    };
    let n = (start.distance(goal) / 0.25).ceil() as usize;
    let waypoints = (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            Point2::new(start.x + (goal.x - start.x) * t, start.y + (goal.y - start.y) * t)
        })
        .collect();
    let pose = Pose2::new(start, rng.gen_range(-PI..PI));
    (world, pose, GlobalPath::new(waypoints).unwrap())
}

fn assert_chain_invariants(path: &CirclePath, cloud: &ObstacleCloud, params: &PlannerParams) {
    assert_eq!(path.len(), params.chain_length);
    let half = params.footprint.half_width();
    for (i, c) in path.circles.iter().enumerate() {
        assert!(
            nearest_obstacle_distance(cloud, c.center) >= c.radius,
            "circle {i} unsafe"
        );
        assert!(c.radius <= params.comfort_radius);
        if i > 0 {
            assert!(c.radius >= half);
            let parent = path.circles[i - 1];
            assert!((parent.center.distance(c.center) - parent.radius).abs() <= 1e-9);
        }
    }
    let n = (params.chain_length - 1) as f64;
    let len = path.length();
    assert!((len - polyline_length(path.centers())).abs() <= 1e-9);
    assert!(len >= n * half && len <= n * params.comfort_radius, "length {len}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn children_are_safe_and_on_the_boundary(
        points in prop::collection::vec(point(4.0), 1..200),
        center in point(1.0),
        radius in 0.376..1.5f64,
        approach in -PI..PI,
    ) {
        let params = PlannerParams::default();
        let cloud = ObstacleCloud::new(points).unwrap();
        let parent = Circle::new(center, radius).unwrap();
        for child in enumerate_children(&parent, approach, &cloud, &[parent], &params) {
            prop_assert!(nearest_obstacle_distance(&cloud, child.circle.center) >= child.circle.radius);
            prop_assert!((center.distance(child.circle.center) - radius).abs() <= 1e-9);
            prop_assert!(child.circle.radius >= params.footprint.half_width());
            prop_assert!(child.circle.radius <= params.comfort_radius);
            prop_assert!(!parent.strictly_contains(child.circle.center));
        }
    }

    #[test]
    fn halving_the_step_keeps_grid_angles(radius in 0.3..2.0f64, approach in -PI..PI) {
        let coarse = PlannerParams::default();
        let fine = PlannerParams { theta_step: coarse.theta_step / 2.0, ..coarse };
        let parent = Circle::new(Point2::default(), radius).unwrap();
        let a = allowed_center_angles(&parent, approach, &coarse);
        let b = allowed_center_angles(&parent, approach, &fine);
        let reverse = normalize_angle(approach + PI);
        for angle in a {
            if angle == reverse {
                continue;
            }
            prop_assert!(b.contains(&angle), "{} missing", angle);
        }
    }

    #[test]
    fn partition_matches_the_definition(
        points in prop::collection::vec(point(4.0), 1..100),
        radius in 0.4..1.5f64,
        approach in -PI..PI,
        h in -PI..PI,
    ) {
        let params = PlannerParams::default();
        let cloud = ObstacleCloud::new(points).unwrap();
        let parent = Circle::new(Point2::default(), radius).unwrap();
        let kids = enumerate_children(&parent, approach, &cloud, &[parent], &params);
        let parts = partition_children(&kids, &parent, Vector2::from_angle(h), &params);
        prop_assert_eq!(parts.q1.len() + parts.q2.len() + parts.q3.len(), kids.len());
        for c in &parts.q1 {
            prop_assert!(heading_overlap(&parent, &c.circle, h));
            prop_assert!((c.circle.radius - params.comfort_radius).abs() <= 1e-9);
        }
        for c in &parts.q2 {
            prop_assert!(heading_overlap(&parent, &c.circle, h));
            prop_assert!(c.circle.radius < params.comfort_radius - 1e-9);
        }
        for c in &parts.q3 {
            prop_assert!(!heading_overlap(&parent, &c.circle, h));
        }
    }

    #[test]
    fn path_selection_survives_rigid_motion(
        seed in 0u64..1_000,
        angle in -PI..PI,
        shift in point(20.0),
    ) {
        let (world, pose, global) = random_world(seed);
        let params = PlannerParams::default();
        let cloud = raycast_scan(&world, &pose, &LidarConfig::default());
        let Ok(first) = plan_dual(&cloud, &pose, None, &global, &params) else { return Ok(()) };
        let previous = first.into_chosen();
        let Ok(res) = plan_dual(&cloud, &pose, Some(&previous), &global, &params) else { return Ok(()) };
        let (Some(pc), Some(pg)) = (res.consistent.clone(), res.greedy.clone()) else { return Ok(()) };

        let (s, c) = angle.sin_cos();
        let move_point = |p: Point2| Point2::new(c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y);
        let move_path = |p: &CirclePath| CirclePath {
            circles: p.circles.iter().map(|k| Circle::new(move_point(k.center), k.radius).unwrap()).collect(),
            approach_angles: p.approach_angles.clone(),
        };
        let moved_global = GlobalPath::new(global.waypoints().iter().copied().map(move_point).collect()).unwrap();
        let before = select_path(&pc, &pg, &global, &params);
        let after = select_path(&move_path(&pc), &move_path(&pg), &moved_global, &params);
        let margin = (before.consistent_cost - before.greedy_cost).abs();
        prop_assume!(margin > 1e-6);
        prop_assert_eq!(before.chosen, after.chosen);
        prop_assert!((before.consistent_cost - after.consistent_cost).abs() < 1e-6);
        prop_assert!((before.greedy_cost - after.greedy_cost).abs() < 1e-6);
    }

    #[test]
    fn lower_consistent_weight_never_drops_the_consistent_path(
        seed in 0u64..1_000,
        w_hi in 0.05..1.0f64,
        frac in 0.0..1.0f64,
    ) {
        let (world, pose, global) = random_world(seed);
        let cloud = raycast_scan(&world, &pose, &LidarConfig::default());
        let base = PlannerParams::default();
        let Ok(first) = plan_dual(&cloud, &pose, None, &global, &base) else { return Ok(()) };
        let previous = first.into_chosen();
        let Ok(res) = plan_dual(&cloud, &pose, Some(&previous), &global, &base) else { return Ok(()) };
        let (Some(pc), Some(pg)) = (res.consistent, res.greedy) else { return Ok(()) };
        let w_lo = w_hi * frac.max(1e-3);
        let hi = select_path(&pc, &pg, &global, &PlannerParams { consistent_weight: w_hi, ..base });
        let lo = select_path(&pc, &pg, &global, &PlannerParams { consistent_weight: w_lo, ..base });
        if hi.chosen == PathVariant::Consistent {
            prop_assert_eq!(lo.chosen, PathVariant::Consistent);
        }
    }

    #[test]
    fn lookahead_moves_outward_with_the_circle(
        seed in 0u64..1_000,
        r1 in 0.4..1.5f64,
        r2 in 0.4..1.5f64,
    ) {
        let (_, pose, global) = random_world(seed);
        let robot = pose.position;
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let small = Circle::new(robot, lo).unwrap();
        let large = Circle::new(robot, hi).unwrap();
        prop_assert!(lookahead_index(&global, robot, &small) <= lookahead_index(&global, robot, &large));
        if let Ok(h) = greedy_heading(&global, robot, &large) {
            prop_assert!(h.norm() > 0.0);
        }
    }
}

#[test]
fn chains_in_random_worlds_are_safe_and_bounded() {
    let mut planned = 0;
    for seed in 0..100u64 {
        let (world, pose, global) = random_world(seed);
        let cloud = raycast_scan(&world, &pose, &LidarConfig::default());
        for l in [3, 5, 7] {
            let params = params_with(l);
            if let Ok(res) = plan_dual(&cloud, &pose, None, &global, &params) {
                assert_chain_invariants(res.chosen_path(), &cloud, &params);
                planned += 1;
            }
        }
    }
    assert!(planned >= 250, "only {planned} of 300 plans succeeded");
}

#[test]
fn planning_is_deterministic() {
    for seed in 0..20u64 {
        let (world, pose, global) = random_world(seed);
        let cloud = raycast_scan(&world, &pose, &LidarConfig::default());
        let params = params_with(7);
        let a = plan_dual(&cloud, &pose, None, &global, &params);
        let b = plan_dual(&cloud, &pose, None, &global, &params);
        assert_eq!(a.ok().map(|r| r.into_chosen()), b.ok().map(|r| r.into_chosen()));
    }
}

#[test]
fn corridor_chain_stays_between_walls() {
    let mut points = Vec::new();
    for i in 0..=400 {
        let x = -2.0 + i as f64 * 0.025;
        points.push(Point2::new(x, 0.5));
        points.push(Point2::new(x, -0.5));
    }
    let cloud = ObstacleCloud::new(points).unwrap();
    let params = params_with(7);
    let heading = |_: usize, _: &Circle| Some(Vector2::new(1.0, 0.0));
    let path = find_chain(&cloud, &Pose2::new(Point2::default(), 0.0), &heading, &params).unwrap();
    assert_chain_invariants(&path, &cloud, &params);
    for c in &path.circles {
        assert!(c.radius <= 0.5 + 1e-12);
        assert!(c.center.y.abs() < 0.5);
    }
}

#[test]
fn cost_of_a_chain_on_the_path_is_its_remaining_length() {
    let global = GlobalPath::new((0..=20).map(|i| Point2::new(i as f64, 0.0)).collect()).unwrap();
    let path = CirclePath {
        circles: vec![
            Circle::new(Point2::new(0.0, 0.0), 1.0).unwrap(),
            Circle::new(Point2::new(1.0, 0.0), 1.0).unwrap(),
            Circle::new(Point2::new(2.0, 0.0), 1.0).unwrap(),
        ],
        approach_angles: vec![0.0; 3],
    };
    assert_eq!(path_cost(&path, &global, 1.0), 20.0);
    assert_eq!(path_cost(&path, &global, 0.5), 19.0);
}
