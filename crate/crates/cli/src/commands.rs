//! `run` and `bench` subcommands.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use fescr::heading::plan_dual;
use fescr::sim::{run_episode_with, Episode, EpisodeOptions, Outcome, Scenario};
use fescr::PlannerParams;

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::output::{render_snapshot, trace_lines, Summary};
use crate::scenario_file::ScenarioFile;
use crate::scenarios;

/// Reads a scenario from `source`: a file path, or the name of a bundled
/// scenario when no such file exists.
pub fn load_scenario_file(source: &str) -> Result<(ScenarioFile, String), CliError> {
    let path = Path::new(source);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(source, e))?;
        return Ok((ScenarioFile::parse(&text, source)?, source.to_string()));
    }
    match scenarios::bundled(source) {
        Some(text) => Ok((ScenarioFile::parse(text, source)?, source.to_string())),
        None => Err(CliError::usage(format!(
            "`{source}` is neither a readable file nor a bundled scenario ({})",
            scenarios::NAMES.join(", ")
        ))),
    }
}

pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<ConfigFile, CliError> {
    let base = match path {
        Some(p) => {
            let origin = p.display().to_string();
            let text = fs::read_to_string(p).map_err(|e| CliError::io(&origin, e))?;
            ConfigFile::parse(&text, &origin)?
        }
        None => ConfigFile::default(),
    };
    base.with_overrides(overrides)
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub scenario: String,
    pub config: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub overrides: Vec<String>,
    /// Write an SVG every this many cycles; `None` disables snapshots.
    pub snapshot_every: Option<usize>,
    /// Named obstacles to drop from the scenario.
    pub remove: Vec<String>,
}

#[derive(Debug)]
pub struct RunReport {
    pub outcome: Outcome,
    pub summary: Summary,
    pub episode: Episode,
}

fn prepare(
    scenario: &str,
    config: Option<&Path>,
    overrides: &[String],
    remove: &[String],
) -> Result<(ScenarioFile, ConfigFile, Scenario, String), CliError> {
    let (mut file, origin) = load_scenario_file(scenario)?;
    for name in remove {
        file = file.without_obstacle(name)?;
    }
    let config = load_config(config, overrides)?;
    let sim = file.to_scenario(&config, &origin)?;
    Ok((file, config, sim, origin))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path.display().to_string(), e))
}

pub fn cmd_run(opts: &RunOptions) -> Result<RunReport, CliError> {
    let (file, config, scenario, _) = prepare(&opts.scenario, opts.config.as_deref(), &opts.overrides, &opts.remove)?;
    let params = config.planner()?;
    let ctrl = config.controller();
    let episode = run_episode_with(&scenario, &params, &ctrl, EpisodeOptions::default())
        .map_err(|e| CliError::validation(&opts.scenario, e.field, e.reason))?;

    fs::create_dir_all(&opts.out_dir).map_err(|e| CliError::io(opts.out_dir.display().to_string(), e))?;
    let summary = Summary::from_episode(&file.name, params.chain_length, &episode);
    write(&opts.out_dir.join("summary.toml"), &summary.to_toml())?;
    write(&opts.out_dir.join("trace.jsonl"), &trace_lines(&episode))?;

    if let Some(every) = opts.snapshot_every.filter(|n| *n > 0) {
        for (cycle, snap) in episode.snapshots.iter().enumerate().step_by(every) {
            let pose = episode.trajectory[cycle];
            let svg = render_snapshot(
                &scenario,
                &params.footprint,
                &episode.trajectory[..=cycle],
                &pose,
                snap.as_ref(),
                &format!("{} L={} cycle {cycle}", file.name, params.chain_length),
            );
            write(&opts.out_dir.join(format!("snap_{cycle:05}.svg")), &svg)?;
        }
    }

    Ok(RunReport {
        outcome: episode.metrics.outcome,
        summary,
        episode,
    })
}

pub fn exit_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Reached => 0,
        Outcome::Deadlock => 2,
        Outcome::Collision => 3,
        Outcome::Timeout => 4,
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchOptions {
    pub scenario: String,
    pub config: Option<PathBuf>,
    pub overrides: Vec<String>,
    pub repetitions: usize,
    /// Chain lengths to measure; empty means the configured one.
    pub chain_lengths: Vec<usize>,
}

/// Latency distribution of one chain length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub chain_length: usize,
    pub outcome: String,
    pub cycles: usize,
    pub samples: usize,
    pub mean_ms: f64,
    pub p50_ms: f64,
    pub p99_ms: f64,
    pub max_ms: f64,
    pub average_local_path_length_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub scenario: String,
    pub repetitions: usize,
    pub lidar_beams: usize,
    pub results: Vec<LatencyStats>,
}

impl BenchReport {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report serializes")
    }
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (q * (sorted.len() - 1) as f64).round() as usize;
    sorted[rank.min(sorted.len() - 1)]
}

/// Records the planner inputs of one closed-loop episode per chain length
/// and replays them `repetitions` times, timing every planning cycle.
pub fn cmd_bench(opts: &BenchOptions) -> Result<BenchReport, CliError> {
    if opts.repetitions == 0 {
        return Err(CliError::validation("bench", "reps", "must be at least 1"));
    }
    let (file, config, scenario, _) = prepare(&opts.scenario, opts.config.as_deref(), &opts.overrides, &[])?;
    let base = config.planner()?;
    let ctrl = config.controller();
    let lengths = if opts.chain_lengths.is_empty() {
        vec![base.chain_length]
    } else {
        opts.chain_lengths.clone()
    };

    let mut results = Vec::new();
    for chain_length in lengths {
        let params = PlannerParams { chain_length, ..base };
        params
            .validate()
            .map_err(|e| CliError::validation("bench", e.field, e.reason))?;
        let episode = run_episode_with(&scenario, &params, &ctrl, EpisodeOptions { record_inputs: true })
            .map_err(|e| CliError::validation(&opts.scenario, e.field, e.reason))?;
        let mut samples = Vec::with_capacity(episode.planner_inputs.len() * opts.repetitions);
        for _ in 0..opts.repetitions {
            for input in &episode.planner_inputs {
                let started = Instant::now();
                let res = plan_dual(
                    &input.cloud,
                    &input.pose,
                    input.previous.as_ref(),
                    &input.global,
                    &params,
                );
                samples.push(started.elapsed().as_secs_f64() * 1e3);
                std::hint::black_box(res.ok());
            }
        }
        let mean = if samples.is_empty() {
            0.0
        } else {
            samples.iter().sum::<f64>() / samples.len() as f64
        };
        samples.sort_by(f64::total_cmp);
        results.push(LatencyStats {
            chain_length,
            outcome: episode.metrics.outcome.as_str().to_string(),
            cycles: episode.planner_inputs.len(),
            samples: samples.len(),
            mean_ms: mean,
            p50_ms: percentile(&samples, 0.5),
            p99_ms: percentile(&samples, 0.99),
            max_ms: samples.last().copied().unwrap_or(0.0),
            average_local_path_length_m: episode.metrics.avg_local_path_length,
        });
    }

    Ok(BenchReport {
        scenario: file.name,
        repetitions: opts.repetitions,
        lidar_beams: config.lidar_beams,
        results,
    })
}
