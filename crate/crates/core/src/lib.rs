//! Deterministic multi-agent flocking with a confidence-score auxiliary
//! controller.
//!
//! Each agent scores how well its velocity agrees with its neighbors'. An
//! auxiliary controller then pulls every agent toward the velocities of
//! better-scored neighbors, on top of any base flocking controller. The crate
//! provides the scoring and auxiliary control, two baseline controllers, an
//! exact zero-order-hold episode engine, the velocity-variance cost, and a
//! seeded sweep harness.

pub mod cli;
pub mod confscore;
pub mod controllers;
pub mod error;
pub mod export;
pub mod graph;
pub mod init;
pub mod metrics;
pub mod params;
pub mod sim;
pub mod sweep;
pub mod types;

pub use confscore::{
    assistant_acceleration, compute_confscores, default_lambda, normalize_scores_for_export,
    top_k_by_score, ConfScores,
};
pub use controllers::{compose, potential_gradient, tanner_global, tanner_local, Controller};
pub use error::{FlockError, Result};
pub use graph::{build_graph_bruteforce, build_graph_grid, NeighborGraph};
pub use init::init_swarm;
pub use metrics::{episode_cost, velocity_variance_term, CostSummary};
pub use params::SimParams;
pub use sim::{run_episode, run_from_state, step, EpisodeOptions, EpisodeRecord};
pub use sweep::{run_sweep, SweepRow, SweepSpec};
pub use types::{AgentState, ControlAction, SwarmState, Vec2};
