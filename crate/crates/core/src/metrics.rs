//! Velocity-variance cost and per-episode summaries.

use serde::{Deserialize, Serialize};

use crate::sim::EpisodeRecord;
use crate::types::{SwarmState, Vec2};

/// Mean squared deviation of agent velocities from the swarm mean velocity,
/// `(1/N) Σ_j |v_j - v̄|²`. Zero for an empty swarm.
pub fn velocity_variance_term(state: &SwarmState) -> f64 {
    velocity_variance(state.velocities())
}

/// [`velocity_variance_term`] over a bare velocity sequence.
pub fn velocity_variance<I>(velocities: I) -> f64
where
    I: IntoIterator<Item = Vec2>,
    I::IntoIter: Clone,
{
    let it = velocities.into_iter();
    let (sum, n) = it
        .clone()
        .fold((Vec2::ZERO, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        return 0.0;
    }
    let mean = sum / n as f64;
    it.map(|v| (v - mean).norm_squared()).sum::<f64>() / n as f64
}

/// Episode-level cost and end-of-episode connectivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostSummary {
    /// Sum of the per-step variance terms over the episode.
    pub total_cost: f64,
    pub initial_step_cost: f64,
    pub final_step_cost: f64,
    pub isolated_at_end: usize,
    pub components_at_end: usize,
}

/// Summarize a finished episode. Per-step terms already carry the 1/N factor,
/// so the total is their plain sum.
pub fn episode_cost(record: &EpisodeRecord) -> CostSummary {
    let terms = &record.per_step_cost_terms;
    let last_conn = record
        .connectivity_history
        .last()
        .copied()
        .unwrap_or_default();
    CostSummary {
        total_cost: terms.iter().sum(),
        initial_step_cost: terms.first().copied().unwrap_or(0.0),
        final_step_cost: terms.last().copied().unwrap_or(0.0),
        isolated_at_end: last_conn.isolated_count,
        components_at_end: last_conn.component_count,
    }
}
