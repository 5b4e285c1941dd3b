//! JSON run configuration.
//!
//! Flat key set (`w, r, v, eta, kappa, sigma, A, B, T, dt, seed` plus the
//! room keys), every field optional with baseline defaults. A manifest file
//! (object with a `config` field) is accepted anywhere a config is, so any
//! run can be reproduced from its own manifest.

use serde::{Deserialize, Serialize};

use crate::env::RoomConfig;
use crate::geometry::Vec2;
use crate::params::{FixedParams, GlobalParams, SimConfig};

use super::FileError;

/// Central prior values, used when a parameter is not given explicitly.
pub const DEFAULT_W: f64 = 0.5;
pub const DEFAULT_R: f64 = 1.0;
pub const DEFAULT_V: f64 = 0.5;
pub const DEFAULT_ETA: f64 = 2.0 / 7.0;

fn d_w() -> f64 {
    DEFAULT_W
}
fn d_r() -> f64 {
    DEFAULT_R
}
fn d_v() -> f64 {
    DEFAULT_V
}
fn d_eta() -> f64 {
    DEFAULT_ETA
}
fn d_kappa() -> f64 {
    0.01
}
fn d_sigma() -> f64 {
    0.05
}
fn d_agents() -> usize {
    49
}
fn d_beacons() -> usize {
    8
}
fn d_steps() -> usize {
    600
}
fn d_dt() -> f64 {
    0.1
}
fn d_width() -> f64 {
    10.0
}
fn d_height() -> f64 {
    10.0
}
fn d_range() -> f64 {
    20.0
}

/// Flat JSON configuration; all numbers are IEEE-754 doubles on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    #[serde(default = "d_w")]
    pub w: f64,
    #[serde(default = "d_r")]
    pub r: f64,
    #[serde(default = "d_v")]
    pub v: f64,
    #[serde(default = "d_eta")]
    pub eta: f64,
    #[serde(default = "d_kappa")]
    pub kappa: f64,
    #[serde(default = "d_sigma")]
    pub sigma: f64,
    #[serde(rename = "A", default = "d_agents")]
    pub num_agents: usize,
    #[serde(rename = "B", default = "d_beacons")]
    pub num_beacons: usize,
    #[serde(rename = "T", default = "d_steps")]
    pub num_steps: usize,
    #[serde(default = "d_dt")]
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "d_width")]
    pub width: f64,
    #[serde(default = "d_height")]
    pub height: f64,
    #[serde(default = "d_range")]
    pub detection_range: f64,
    #[serde(default)]
    pub reassign_beacons: bool,
}

impl Default for RunConfigFile {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl RunConfigFile {
    /// Parses a config, accepting either a bare config object or a manifest
    /// that embeds one under `config`.
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let config_value = match value.get("config") {
            Some(inner) if value.get("tool").is_some() => inner.clone(),
            _ => value,
        };
        let config: RunConfigFile = serde_json::from_value(config_value)
            .map_err(|e| FileError::Config(e.to_string()))?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, FileError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn params(&self) -> GlobalParams<f64> {
        GlobalParams::new(self.w, self.r, self.v, self.eta)
    }

    pub fn fixed(&self) -> FixedParams<f64> {
        FixedParams {
            kappa: self.kappa,
            sigma: self.sigma,
        }
    }

    pub fn sim(&self) -> SimConfig<f64> {
        SimConfig {
            num_agents: self.num_agents,
            num_beacons: self.num_beacons,
            num_steps: self.num_steps,
            dt: self.dt,
            seed: self.seed,
            reassign_beacons: self.reassign_beacons,
        }
    }

    pub fn room(&self) -> RoomConfig<f64> {
        RoomConfig {
            width: self.width,
            height: self.height,
            detection_range: self.detection_range,
            world_position: Vec2::zero(),
        }
    }

    /// All invariant violations across the resolved configuration, as
    /// human-readable messages naming the offending field and its range.
    pub fn validate(&self) -> Result<(), FileError> {
        let mut problems: Vec<String> = self
            .params()
            .validate()
            .iter()
            .map(ToString::to_string)
            .collect();
        if let Err(e) = self.fixed().validate() {
            problems.push(e);
        }
        if let Err(e) = self.sim().validate() {
            problems.push(e);
        }
        if let Err(e) = self.room().validate() {
            problems.push(e.to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(FileError::Config(problems.join("; ")))
        }
    }
}
