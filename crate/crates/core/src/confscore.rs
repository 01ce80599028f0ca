//! Confidence scores and the assistant (auxiliary) acceleration.
//!
//! An agent's score is the sum, over its neighbors, of the cosine similarity
//! between its velocity and the neighbor's. Agents then accelerate toward the
//! velocities of higher-scored neighbors among their top-k by score, weighted
//! by the score gap.

use serde::{Deserialize, Serialize};

use crate::graph::NeighborGraph;
use crate::types::{ControlAction, SwarmState, Vec2};

/// Speeds below this contribute nothing to a score (the cosine is undefined at 0).
pub const MIN_SPEED: f64 = 1e-9;

/// Per-agent confidence scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfScores {
    pub scores: Vec<f64>,
}

impl ConfScores {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.scores[i]
    }
}

impl From<Vec<f64>> for ConfScores {
    fn from(scores: Vec<f64>) -> Self {
        Self { scores }
    }
}

/// Cosine of the angle between two velocities, or 0 if either is (nearly) still.
/// Clamped to [-1, 1] so rounding never pushes a score past its degree.
#[inline]
pub fn velocity_cosine(a: Vec2, b: Vec2) -> f64 {
    let (na2, nb2) = (a.norm_squared(), b.norm_squared());
    if na2 < MIN_SPEED * MIN_SPEED || nb2 < MIN_SPEED * MIN_SPEED {
        return 0.0;
    }
    (a.dot(b) / (na2 * nb2).sqrt()).clamp(-1.0, 1.0)
}

/// Score every agent. Terms are summed in ascending neighbor order.
pub fn compute_confscores(state: &SwarmState, graph: &NeighborGraph) -> ConfScores {
    let scores = (0..state.len())
        .map(|i| {
            let vi = state.agents[i].velocity;
            graph
                .neighbors(i)
                .iter()
                .map(|&j| velocity_cosine(vi, state.agents[j].velocity))
                .fold(0.0, |acc, c| acc + c)
        })
        .collect();
    ConfScores { scores }
}

/// The `min(k, degree)` neighbors of `i` with the highest scores, best first.
/// Equal scores rank the lower agent index first.
pub fn top_k_by_score(
    graph: &NeighborGraph,
    scores: &ConfScores,
    i: usize,
    k: usize,
) -> Vec<usize> {
    let mut ranked = graph.neighbors(i).to_vec();
    ranked.sort_by(|&a, &b| {
        scores.scores[b]
            .total_cmp(&scores.scores[a])
            .then(a.cmp(&b))
    });
    ranked.truncate(k);
    ranked
}

/// Auxiliary acceleration for every agent.
///
/// For agent `i`, the leaders are those top-k neighbors with a strictly higher
/// score. Each contributes `lambda * (C_j - C_i) * (v_j - v_i)`; contributions
/// are summed in ascending neighbor index and averaged over the leader count.
/// No leaders means zero acceleration.
pub fn assistant_acceleration(
    state: &SwarmState,
    graph: &NeighborGraph,
    scores: &ConfScores,
    k: usize,
    lambda: f64,
) -> ControlAction {
    let accels = (0..state.len())
        .map(|i| {
            let ci = scores.scores[i];
            let vi = state.agents[i].velocity;
            let mut top = top_k_by_score(graph, scores, i, k);
            top.retain(|&j| scores.scores[j] > ci);
            if top.is_empty() {
                return Vec2::ZERO;
            }
            top.sort_unstable();
            let mut acc = Vec2::ZERO;
            for &j in &top {
                let gain = lambda * (scores.scores[j] - ci);
                acc += (state.agents[j].velocity - vi) * gain;
            }
            acc / top.len() as f64
        })
        .collect();
    ControlAction { accels }
}

/// Heuristic auxiliary gain: 30/N for hand-designed base controllers, 15/N for
/// learned ones.
pub fn default_lambda(n_agents: usize, learning_based: bool) -> f64 {
    let numerator = if learning_based { 15.0 } else { 30.0 };
    numerator / n_agents as f64
}

/// Min-max normalize scores to [0, 1] for plotting. A swarm whose scores are
/// all equal maps to 0.5 everywhere.
pub fn normalize_scores_for_export(scores: &ConfScores) -> Vec<f64> {
    let (lo, hi) = scores
        .scores
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
            (lo.min(c), hi.max(c))
        });
    let range = hi - lo;
    scores
        .scores
        .iter()
        .map(|&c| if range > 0.0 { (c - lo) / range } else { 0.5 })
        .collect()
}
