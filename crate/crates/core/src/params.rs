//! Simulation parameters and their JSON form.

use serde::{Deserialize, Serialize};

use crate::confscore::default_lambda;
use crate::error::{FlockError, Result};

pub const DEFAULT_N_AGENTS: usize = 100;
pub const DEFAULT_COMM_RADIUS: f64 = 1.0;
pub const DEFAULT_V_MAX: f64 = 3.5;
pub const DEFAULT_SAMPLING_TIME: f64 = 0.01;
pub const DEFAULT_N_STEPS: usize = 500;
pub const DEFAULT_TOP_K: usize = 3;
pub const DEFAULT_MIN_SEPARATION: f64 = 0.1;

/// Side of the initialization square for `n` agents: 1 m per √agent, which puts
/// the mean nearest-neighbor spacing close to 1 m.
pub fn default_box_side(n_agents: usize) -> f64 {
    (n_agents as f64).sqrt()
}

/// Parameters of one episode.
///
/// Deserializes from JSON with every field optional; missing fields take the
/// defaults above, and a missing `init_box_side` is derived from `n_agents`.
/// The resolved value is validated before it is handed out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SimParamsDoc")]
pub struct SimParams {
    pub n_agents: usize,
    pub comm_radius: f64,
    pub v_max: f64,
    pub sampling_time: f64,
    pub n_steps: usize,
    pub top_k: usize,
    pub lambda_override: Option<f64>,
    pub aux_enabled: bool,
    pub seed: u64,
    pub init_min_separation: f64,
    pub init_box_side: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self::with_agents(DEFAULT_N_AGENTS)
    }
}

impl SimParams {
    /// Defaults for a swarm of `n_agents`, with the box side scaled to match.
    pub fn with_agents(n_agents: usize) -> Self {
        Self {
            n_agents,
            comm_radius: DEFAULT_COMM_RADIUS,
            v_max: DEFAULT_V_MAX,
            sampling_time: DEFAULT_SAMPLING_TIME,
            n_steps: DEFAULT_N_STEPS,
            top_k: DEFAULT_TOP_K,
            lambda_override: None,
            aux_enabled: true,
            seed: 0,
            init_min_separation: DEFAULT_MIN_SEPARATION,
            init_box_side: default_box_side(n_agents),
        }
    }

    /// The auxiliary gain actually used: the override, or 30/N.
    pub fn lambda(&self) -> f64 {
        self.lambda_override
            .unwrap_or_else(|| default_lambda(self.n_agents, false))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(FlockError::InvalidParams(msg));
        if self.n_agents < 2 {
            return bad(format!("n_agents must be >= 2, got {}", self.n_agents));
        }
        if !(self.comm_radius.is_finite() && self.comm_radius > 0.0) {
            return bad(format!("comm_radius must be > 0, got {}", self.comm_radius));
        }
        if !(self.v_max.is_finite() && self.v_max >= 0.0) {
            return bad(format!("v_max must be >= 0, got {}", self.v_max));
        }
        if !(self.sampling_time.is_finite() && self.sampling_time > 0.0) {
            return bad(format!(
                "sampling_time must be > 0, got {}",
                self.sampling_time
            ));
        }
        if self.n_steps == 0 {
            return bad("n_steps must be >= 1".into());
        }
        if self.top_k == 0 {
            return bad("top_k must be >= 1".into());
        }
        if let Some(l) = self.lambda_override {
            if !(l.is_finite() && l >= 0.0) {
                return bad(format!("lambda_override must be >= 0, got {l}"));
            }
        }
        if !(self.init_min_separation.is_finite() && self.init_min_separation > 0.0) {
            return bad(format!(
                "init_min_separation must be > 0, got {}",
                self.init_min_separation
            ));
        }
        if !(self.init_box_side.is_finite() && self.init_box_side > 0.0) {
            return bad(format!(
                "init_box_side must be > 0, got {}",
                self.init_box_side
            ));
        }
        if self.init_min_separation >= self.init_box_side {
            return bad(format!(
                "init_min_separation ({}) must be < init_box_side ({})",
                self.init_min_separation, self.init_box_side
            ));
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| FlockError::InvalidParams(e.to_string()))
    }
}

/// On-disk shape of [`SimParams`]; every field may be omitted.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimParamsDoc {
    pub n_agents: Option<usize>,
    pub comm_radius: Option<f64>,
    pub v_max: Option<f64>,
    pub sampling_time: Option<f64>,
    pub n_steps: Option<usize>,
    pub top_k: Option<usize>,
    pub lambda_override: Option<f64>,
    pub aux_enabled: Option<bool>,
    pub seed: Option<u64>,
    pub init_min_separation: Option<f64>,
    pub init_box_side: Option<f64>,
}

impl SimParamsDoc {
    pub fn resolve(self) -> SimParams {
        let n = self.n_agents.unwrap_or(DEFAULT_N_AGENTS);
        let d = SimParams::with_agents(n);
        SimParams {
            n_agents: n,
            comm_radius: self.comm_radius.unwrap_or(d.comm_radius),
            v_max: self.v_max.unwrap_or(d.v_max),
            sampling_time: self.sampling_time.unwrap_or(d.sampling_time),
            n_steps: self.n_steps.unwrap_or(d.n_steps),
            top_k: self.top_k.unwrap_or(d.top_k),
            lambda_override: self.lambda_override,
            aux_enabled: self.aux_enabled.unwrap_or(d.aux_enabled),
            seed: self.seed.unwrap_or(d.seed),
            init_min_separation: self.init_min_separation.unwrap_or(d.init_min_separation),
            init_box_side: self.init_box_side.unwrap_or(d.init_box_side),
        }
    }
}

impl TryFrom<SimParamsDoc> for SimParams {
    type Error = FlockError;

    fn try_from(doc: SimParamsDoc) -> Result<Self> {
        let p = doc.resolve();
        p.validate()?;
        Ok(p)
    }
}
