//! Run configuration: planner, controller and simulator knobs in one flat
//! TOML table.

use serde::{Deserialize, Serialize};

use fescr::sim::LidarConfig;
use fescr::{ControllerParams, Footprint, PlannerParams, ScaleNormalization};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub robot_width: f64,
    pub robot_length: f64,
    pub comfort_radius: f64,
    pub theta_step: f64,
    pub chain_length: usize,
    pub consistent_weight: f64,

    pub k_p: f64,
    pub eps_min: f64,
    pub eps_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub omega_max: f64,
    pub scale_normalization: ScaleNormalization,

    pub dt: f64,
    pub lidar_beams: usize,
    pub lidar_range: f64,
    pub lidar_span: f64,
    pub noise_std: f64,
    pub noise_seed: u64,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let planner = PlannerParams::default();
        let ctrl = ControllerParams::default();
        let lidar = LidarConfig::default();
        Self {
            robot_width: planner.footprint.width(),
            robot_length: planner.footprint.length(),
            comfort_radius: planner.comfort_radius,
            theta_step: planner.theta_step,
            chain_length: planner.chain_length,
            consistent_weight: planner.consistent_weight,
            k_p: ctrl.k_p,
            eps_min: ctrl.eps_min,
            eps_max: ctrl.eps_max,
            v_min: ctrl.v_min,
            v_max: ctrl.v_max,
            omega_max: ctrl.omega_max,
            scale_normalization: ctrl.scale_normalization,
            dt: 0.05,
            lidar_beams: lidar.beam_count,
            lidar_range: lidar.max_range,
            lidar_span: lidar.span,
            noise_std: lidar.noise_std,
            noise_seed: lidar.noise_seed,
        }
    }
}

/// Short names accepted by `--set` in addition to the field names.
fn canonical_key(key: &str) -> &str {
    match key {
        "L" => "chain_length",
        "w_p" => "consistent_weight",
        "width" => "robot_width",
        "length" => "robot_length",
        other => other,
    }
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let config: ConfigFile = toml::from_str(text).map_err(|e| CliError::parse(origin, e.to_string()))?;
        config.validate(origin)?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies `key=value` overrides. Values use TOML syntax.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self, CliError> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        let mut table: toml::Table = toml::from_str(&self.to_toml()).expect("config round-trips");
        for item in overrides {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("--set expects key=value, got `{item}`")))?;
            let key = canonical_key(key.trim());
            let parsed: toml::Table = toml::from_str(&format!("v = {}", raw.trim()))
                .or_else(|_| toml::from_str(&format!("v = \"{}\"", raw.trim())))
                .map_err(|e| CliError::parse("--set", format!("{key}: {e}")))?;
            table.insert(key.to_string(), parsed["v"].clone());
        }
        let text = toml::to_string(&table).expect("table serializes");
        Self::parse(&text, "--set")
    }

    pub fn planner(&self) -> Result<PlannerParams, CliError> {
        let footprint = Footprint::new(self.robot_width, self.robot_length)
            .map_err(|e| CliError::validation("config", "robot_width", e.to_string()))?;
        Ok(PlannerParams {
            footprint,
            comfort_radius: self.comfort_radius,
            theta_step: self.theta_step,
            chain_length: self.chain_length,
            consistent_weight: self.consistent_weight,
        })
    }

    pub fn controller(&self) -> ControllerParams {
        ControllerParams {
            k_p: self.k_p,
            eps_min: self.eps_min,
            eps_max: self.eps_max,
            v_min: self.v_min,
            v_max: self.v_max,
            omega_max: self.omega_max,
            scale_normalization: self.scale_normalization,
        }
    }

    pub fn lidar(&self) -> LidarConfig {
        LidarConfig {
            beam_count: self.lidar_beams,
            max_range: self.lidar_range,
            span: self.lidar_span,
            noise_std: self.noise_std,
            noise_seed: self.noise_seed,
        }
    }

    pub fn validate(&self, origin: &str) -> Result<(), CliError> {
        let planner = self.planner().map_err(|e| e.with_origin(origin))?;
        planner
            .validate()
            .map_err(|e| CliError::validation(origin, &e.field, e.reason))?;
        self.controller()
            .validate()
            .map_err(|e| CliError::validation(origin, &e.field, e.reason))?;
        self.lidar()
            .validate(self.comfort_radius)
            .map_err(|e| CliError::validation(origin, &e.field, e.reason))?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(CliError::validation(
                origin,
                "dt",
                format!("must be positive, got {}", self.dt),
            ));
        }
        // TOML integers are signed 64-bit
        if i64::try_from(self.noise_seed).is_err() {
            return Err(CliError::validation(
                origin,
                "noise_seed",
                format!("must be at most {}, got {}", i64::MAX, self.noise_seed),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_planner_table() {
        let c = ConfigFile::default();
        assert_eq!(c.robot_width, 0.75);
        assert_eq!(c.robot_length, 1.1);
        assert_eq!(c.comfort_radius, 1.5);
        assert_eq!(c.theta_step, 0.06);
        assert_eq!(c.consistent_weight, 0.7);
        assert_eq!((c.eps_min, c.eps_max), (0.2, 0.4));
        assert_eq!((c.v_min, c.v_max), (0.2, 1.0));
        assert_eq!((c.k_p, c.omega_max), (2.0, 0.8));
        c.validate("default").unwrap();
    }

    #[test]
    fn empty_file_is_all_defaults() {
        assert_eq!(ConfigFile::parse("", "x").unwrap(), ConfigFile::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ConfigFile::parse("chain_lenght = 3\n", "cfg.toml").unwrap_err();
        assert!(err.to_string().contains("cfg.toml"));
        assert!(err.to_string().contains("chain_lenght"));
    }

    #[test]
    fn overrides_with_aliases() {
        let c = ConfigFile::default()
            .with_overrides(&[
                "L=3".into(),
                "w_p = 0.5".into(),
                "scale_normalization=double_comfort".into(),
            ])
            .unwrap();
        assert_eq!(c.chain_length, 3);
        assert_eq!(c.consistent_weight, 0.5);
        assert_eq!(c.scale_normalization, ScaleNormalization::DoubleComfort);
    }

    #[test]
    fn invalid_override_names_field() {
        let err = ConfigFile::default().with_overrides(&["L=1".into()]).unwrap_err();
        assert!(err.to_string().contains("chain_length"));
        assert!(ConfigFile::default().with_overrides(&["L".into()]).is_err());
    }
}
