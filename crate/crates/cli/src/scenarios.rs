//! Scenarios shipped with the binary.
//!
//! The two environments are hand-built reconstructions of a cluttered indoor
//! course (rooms, doorways, corridors) and are approximate: they share the
//! topology of the evaluation maps, not their exact geometry.

pub const NAMES: &[&str] = &["open_env", "obstacle_env", "narrow_corridor"];

pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "open_env" => Some(include_str!("../scenarios/open_env.toml")),
        "obstacle_env" => Some(include_str!("../scenarios/obstacle_env.toml")),
        "narrow_corridor" => Some(include_str!("../scenarios/narrow_corridor.toml")),
        _ => None,
    }
}
