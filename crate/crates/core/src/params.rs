//! Model parameters and simulation configuration.
//!
//! All agents in a simulation share one [`GlobalParams`] (complete pooling).
//! κ and σ are fixed nuisance constants, not estimated.

use serde::{Deserialize, Serialize};

use crate::real::Real;

/// The four estimated parameters shared by every agent.
///
/// * `w`   — modulation weight between external and internal influence, [0, 1]
/// * `r`   — neighbor sensing radius, meters, > 0
/// * `v`   — movement speed (drift magnitude), m/s, (0, 1)
/// * `eta` — rotational noise variance of the internal influence, rad², (0, 1)
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalParams<F> {
    pub w: F,
    pub r: F,
    pub v: F,
    pub eta: F,
}

/// Names of the estimated parameters, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamName {
    W,
    R,
    V,
    Eta,
}

impl ParamName {
    pub const ALL: [ParamName; 4] = [ParamName::W, ParamName::R, ParamName::V, ParamName::Eta];

    pub fn label(self) -> &'static str {
        match self {
            ParamName::W => "w",
            ParamName::R => "r",
            ParamName::V => "v",
            ParamName::Eta => "eta",
        }
    }
}

impl std::fmt::Display for ParamName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A single violated parameter invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ParamViolation {
    #[error("w out of range: must lie in [0, 1]")]
    WOutOfRange,
    #[error("r not positive: must be > 0")]
    RNotPositive,
    #[error("v out of range: must lie in (0, 1)")]
    VOutOfRange,
    #[error("eta out of range: must lie in (0, 1)")]
    EtaOutOfRange,
}

impl<F: Real> GlobalParams<F> {
    pub fn new(w: F, r: F, v: F, eta: F) -> Self {
        Self { w, r, v, eta }
    }

    pub fn get(&self, name: ParamName) -> F {
        match name {
            ParamName::W => self.w,
            ParamName::R => self.r,
            ParamName::V => self.v,
            ParamName::Eta => self.eta,
        }
    }

    pub fn set(&mut self, name: ParamName, value: F) {
        match name {
            ParamName::W => self.w = value,
            ParamName::R => self.r = value,
            ParamName::V => self.v = value,
            ParamName::Eta => self.eta = value,
        }
    }

    /// All violated invariants; empty when the parameter vector is valid.
    pub fn validate(&self) -> Vec<ParamViolation> {
        let mut v = Vec::new();
        let zero = F::zero();
        let one = F::one();
        if !(self.w >= zero && self.w <= one) {
            v.push(ParamViolation::WOutOfRange);
        }
        if !(self.r > zero && self.r.is_finite()) {
            v.push(ParamViolation::RNotPositive);
        }
        if !(self.v > zero && self.v < one) {
            v.push(ParamViolation::VOutOfRange);
        }
        if !(self.eta > zero && self.eta < one) {
            v.push(ParamViolation::EtaOutOfRange);
        }
        v
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn to_array(&self) -> [F; 4] {
        [self.w, self.r, self.v, self.eta]
    }

    pub fn from_array(a: [F; 4]) -> Self {
        Self {
            w: a[0],
            r: a[1],
            v: a[2],
            eta: a[3],
        }
    }
}

/// Fixed nuisance constants.
///
/// * `kappa` — half-width of the uniform rotational noise of the external
///   influence, radians, constrained to [0, 0.01]
/// * `sigma` — diffusion coefficient of the positional Wiener term, m/√s
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedParams<F> {
    pub kappa: F,
    pub sigma: F,
}

impl<F: Real> Default for FixedParams<F> {
    fn default() -> Self {
        // κ at its admissible bound, σ small relative to the room scale.
        Self {
            kappa: F::from_f64(0.01),
            sigma: F::from_f64(0.05),
        }
    }
}

impl<F: Real> FixedParams<F> {
    pub fn validate(&self) -> Result<(), String> {
        let kappa_max = F::from_f64(0.01);
        if !(self.kappa >= F::zero() && self.kappa <= kappa_max) {
            return Err(format!("kappa must lie in [0, 0.01], got {}", self.kappa));
        }
        if !(self.sigma >= F::zero() && self.sigma.is_finite()) {
            return Err(format!("sigma must be >= 0, got {}", self.sigma));
        }
        Ok(())
    }
}

/// Per-run simulation configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig<F> {
    /// Number of agents A.
    pub num_agents: usize,
    /// Number of beacons B.
    pub num_beacons: usize,
    /// Number of time steps T.
    pub num_steps: usize,
    /// Seconds per step.
    pub dt: F,
    /// Seed of the per-simulation random stream.
    pub seed: u64,
    /// Recompute the nearest-beacon assignment every step instead of freezing
    /// it at onset. Exploratory mode only; inference uses the frozen default.
    #[serde(default)]
    pub reassign_beacons: bool,
}

impl<F: Real> Default for SimConfig<F> {
    fn default() -> Self {
        Self {
            num_agents: 49,
            num_beacons: 8,
            num_steps: 600,
            dt: F::from_f64(0.1),
            seed: 0,
            reassign_beacons: false,
        }
    }
}

impl<F: Real> SimConfig<F> {
    pub fn validate(&self) -> Result<(), String> {
        if self.num_agents == 0 {
            return Err("num_agents must be >= 1".into());
        }
        if self.num_beacons == 0 {
            return Err("num_beacons must be >= 1".into());
        }
        if self.num_steps == 0 {
            return Err("num_steps must be >= 1".into());
        }
        if !(self.dt > F::zero() && self.dt.is_finite()) {
            return Err(format!("dt must be > 0, got {}", self.dt));
        }
        Ok(())
    }
}
