//! Parameter sweeps over agent count, radius, initial speed and top-k.
//!
//! Cells run in parallel; rows come back in a fixed order (N, R, V, k,
//! controller, seed, aux off/on) regardless of scheduling, so the CSV is
//! byte-stable for a given spec.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::controllers::controller_by_name;
use crate::error::{FlockError, Result};
use crate::export::format_real;
use crate::init::init_swarm;
use crate::metrics::{episode_cost, CostSummary};
use crate::params::SimParams;
use crate::sim::{run_from_state, EpisodeOptions, ScoreSampling};

pub const DEFAULT_RADII: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 4.0];
pub const DEFAULT_SPEEDS: [f64; 4] = [0.5, 1.5, 2.5, 3.5];
pub const DEFAULT_AGENT_COUNTS: [usize; 3] = [25, 50, 100];
pub const DEFAULT_TOP_K: [usize; 3] = [1, 3, 5];

fn default_radii() -> Vec<f64> {
    DEFAULT_RADII.to_vec()
}
fn default_speeds() -> Vec<f64> {
    DEFAULT_SPEEDS.to_vec()
}
fn default_agent_counts() -> Vec<usize> {
    DEFAULT_AGENT_COUNTS.to_vec()
}
fn default_top_k() -> Vec<usize> {
    DEFAULT_TOP_K.to_vec()
}
fn default_controllers() -> Vec<String> {
    vec!["local".into(), "global".into()]
}
fn default_seeds() -> usize {
    5
}
fn yes() -> bool {
    true
}

/// A sweep grid. Omitted lists fall back to the default grids above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub base: SimParams,
    #[serde(default = "default_agent_counts")]
    pub n_agents_values: Vec<usize>,
    #[serde(default = "default_radii")]
    pub comm_radius_values: Vec<f64>,
    #[serde(default = "default_speeds")]
    pub v_max_values: Vec<f64>,
    #[serde(default = "default_top_k")]
    pub top_k_values: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds_per_cell: usize,
    #[serde(default = "default_controllers")]
    pub controllers: Vec<String>,
    /// Run every seed twice, aux off then on, from the same initial state.
    #[serde(default = "yes")]
    pub paired_ab: bool,
    /// Scale `init_box_side` with √N relative to `base.n_agents`, keeping the
    /// initial density fixed across agent counts.
    #[serde(default = "yes")]
    pub scale_box_with_agents: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            base: SimParams::default(),
            n_agents_values: default_agent_counts(),
            comm_radius_values: default_radii(),
            v_max_values: default_speeds(),
            top_k_values: default_top_k(),
            seeds_per_cell: default_seeds(),
            controllers: default_controllers(),
            paired_ab: true,
            scale_box_with_agents: true,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(FlockError::InvalidParams(m.to_string()));
        if self.n_agents_values.is_empty()
            || self.comm_radius_values.is_empty()
            || self.v_max_values.is_empty()
            || self.top_k_values.is_empty()
            || self.controllers.is_empty()
        {
            return bad("sweep value lists must be non-empty");
        }
        if self.seeds_per_cell == 0 {
            return bad("seeds_per_cell must be >= 1");
        }
        for c in &self.controllers {
            controller_by_name(c)?;
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: Self =
            serde_json::from_str(s).map_err(|e| FlockError::InvalidParams(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Parameters for one grid cell and seed (aux flag left as in `base`).
    pub fn cell_params(&self, cell: &Cell, seed: u64) -> SimParams {
        let base = &self.base;
        let init_box_side = if self.scale_box_with_agents {
            base.init_box_side * (cell.n_agents as f64 / base.n_agents as f64).sqrt()
        } else {
            base.init_box_side
        };
        SimParams {
            n_agents: cell.n_agents,
            comm_radius: cell.comm_radius,
            v_max: cell.v_max,
            top_k: cell.top_k,
            seed,
            init_box_side,
            ..base.clone()
        }
    }

    /// Grid cells in emission order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &n_agents in &self.n_agents_values {
            for &comm_radius in &self.comm_radius_values {
                for &v_max in &self.v_max_values {
                    for &top_k in &self.top_k_values {
                        for controller in &self.controllers {
                            out.push(Cell {
                                controller: controller.clone(),
                                n_agents,
                                comm_radius,
                                v_max,
                                top_k,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn row_count(&self) -> usize {
        self.cells().len() * self.seeds_per_cell * if self.paired_ab { 2 } else { 1 }
    }
}

/// One point of the sweep grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub controller: String,
    pub n_agents: usize,
    pub comm_radius: f64,
    pub v_max: f64,
    pub top_k: usize,
}

/// One episode's outcome. Exactly one of `summary` / `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub cell: Cell,
    pub lambda: f64,
    pub seed: u64,
    pub aux_enabled: bool,
    pub summary: Option<CostSummary>,
    pub error: Option<String>,
    /// Fingerprint of the initial state; equal across a paired A/B couple.
    pub initial_fingerprint: Option<u64>,
}

fn run_job(spec: &SweepSpec, cell: &Cell, seed: u64) -> Vec<SweepRow> {
    let params = spec.cell_params(cell, seed);
    let aux_flags: &[bool] = if spec.paired_ab {
        &[false, true]
    } else {
        std::slice::from_ref(&spec.base.aux_enabled)
    };
    let initial = init_swarm(&params);
    let controller = controller_by_name(&cell.controller);
    aux_flags
        .iter()
        .map(|&aux_enabled| {
            let params = SimParams {
                aux_enabled,
                ..params.clone()
            };
            let mut row = SweepRow {
                cell: cell.clone(),
                lambda: params.lambda(),
                seed,
                aux_enabled,
                summary: None,
                error: None,
                initial_fingerprint: None,
            };
            let outcome = match (&initial, &controller) {
                (Ok(state), Ok(ctrl)) => {
                    row.initial_fingerprint = Some(state.fingerprint());
                    let opts = EpisodeOptions {
                        score_sampling: ScoreSampling::Off,
                    };
                    run_from_state(&params, ctrl.as_ref(), state.clone(), &opts, |_| {})
                }
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            match outcome {
                Ok(record) => row.summary = Some(episode_cost(&record)),
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect()
}

/// Run every cell × seed (× aux off/on). Per-episode failures become rows with
/// `error` set; the rest of the sweep is unaffected.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let jobs: Vec<(Cell, u64)> = spec
        .cells()
        .into_iter()
        .flat_map(|cell| (0..spec.seeds_per_cell as u64).map(move |s| (cell.clone(), s)))
        .map(|(cell, s)| (cell, spec.base.seed.wrapping_add(s)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|(cell, seed)| run_job(spec, cell, *seed))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect())
}

pub const SWEEP_HEADER: [&str; 14] = [
    "controller",
    "n_agents",
    "comm_radius",
    "v_max",
    "top_k",
    "lambda",
    "seed",
    "aux_enabled",
    "total_cost",
    "initial_step_cost",
    "final_step_cost",
    "isolated_at_end",
    "components_at_end",
    "error",
];

impl SweepRow {
    pub fn csv_record(&self) -> [String; 14] {
        let s = self.summary.as_ref();
        let real = |f: fn(&CostSummary) -> f64| s.map(|s| format_real(f(s))).unwrap_or_default();
        let count = |f: fn(&CostSummary) -> usize| s.map(|s| f(s).to_string()).unwrap_or_default();
        [
            self.cell.controller.clone(),
            self.cell.n_agents.to_string(),
            format_real(self.cell.comm_radius),
            format_real(self.cell.v_max),
            self.cell.top_k.to_string(),
            format_real(self.lambda),
            self.seed.to_string(),
            self.aux_enabled.to_string(),
            real(|s| s.total_cost),
            real(|s| s.initial_step_cost),
            real(|s| s.final_step_cost),
            count(|s| s.isolated_at_end),
            count(|s| s.components_at_end),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        w.write_record(row.csv_record())?;
    }
    w.flush()?;
    Ok(())
}
