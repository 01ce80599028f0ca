//! Discrete-time episode engine.
//!
//! Agents are double integrators under zero-order hold: the action is constant
//! over each sampling interval, so the update below is the exact integral of
//! the dynamics rather than an Euler approximation.

use serde::{Deserialize, Serialize};

use crate::confscore::{assistant_acceleration, compute_confscores, ConfScores};
use crate::controllers::{compose, controller_by_name, Controller};
use crate::error::{FlockError, Result};
use crate::graph::{build_graph_grid, NeighborGraph};
use crate::init::init_swarm;
use crate::metrics::velocity_variance_term;
use crate::params::SimParams;
use crate::types::{ControlAction, SwarmState, Vec2};

/// Advance one sampling interval:
/// `p' = p + v T + ½ u T²`, `v' = v + u T`.
pub fn step(state: &SwarmState, action: &ControlAction, sampling_time: f64) -> Result<SwarmState> {
    if action.len() != state.len() {
        return Err(FlockError::LengthMismatch {
            expected: state.len(),
            got: action.len(),
        });
    }
    if let Some(i) = action.first_non_finite() {
        return Err(FlockError::NonFiniteAction(i));
    }
    let t = sampling_time;
    let half_t2 = 0.5 * t * t;
    let agents = state
        .agents
        .iter()
        .zip(&action.accels)
        .map(|(a, &u)| {
            let mut next = *a;
            next.position = a.position + a.velocity * t + u * half_t2;
            next.velocity = a.velocity + u * t;
            next
        })
        .collect();
    Ok(SwarmState {
        agents,
        step_index: state.step_index + 1,
    })
}

/// Graph connectivity at one step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub isolated_count: usize,
    pub component_count: usize,
}

impl Connectivity {
    pub fn of(graph: &NeighborGraph) -> Self {
        Self {
            isolated_count: graph.isolated_count(),
            component_count: graph.component_count(),
        }
    }
}

/// Scores and positions captured at one step, for score dumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSample {
    pub step: usize,
    pub positions: Vec<Vec2>,
    pub scores: ConfScores,
}

/// Which steps get a [`ScoreSample`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoreSampling {
    /// No score history.
    Off,
    /// Steps 0, n_steps/2 and n_steps-1.
    #[default]
    Sparse,
    /// Every step.
    Every,
}

impl ScoreSampling {
    pub fn includes(self, step: usize, n_steps: usize) -> bool {
        match self {
            ScoreSampling::Off => false,
            ScoreSampling::Sparse => step == 0 || step == n_steps / 2 || step + 1 == n_steps,
            ScoreSampling::Every => true,
        }
    }
}

/// Everything recorded during one episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub params: SimParams,
    pub controller: String,
    pub lambda: f64,
    pub initial_fingerprint: u64,
    /// Velocity-variance term after each update (steps 1..=n_steps).
    pub per_step_cost_terms: Vec<f64>,
    pub final_state: SwarmState,
    pub score_history: Option<Vec<ScoreSample>>,
    /// Connectivity after each update, aligned with `per_step_cost_terms`.
    pub connectivity_history: Vec<Connectivity>,
}

/// View of the swarm handed to an observer after every update.
#[derive(Debug, Clone, Copy)]
pub struct StepSnapshot<'a> {
    pub state: &'a SwarmState,
    pub graph: &'a NeighborGraph,
    pub cost_term: f64,
    pub connectivity: Connectivity,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EpisodeOptions {
    pub score_sampling: ScoreSampling,
}

/// Initialize from `params.seed` and run `controller_name` for `params.n_steps`.
pub fn run_episode(params: &SimParams, controller_name: &str) -> Result<EpisodeRecord> {
    let controller = controller_by_name(controller_name)?;
    let initial = init_swarm(params)?;
    run_from_state(
        params,
        controller.as_ref(),
        initial,
        &EpisodeOptions::default(),
        |_| {},
    )
}

/// Run an episode from an explicit initial state. `observer` sees the swarm
/// after every update.
///
/// Per step: build graph (carried over from the previous update), score if
/// needed, base action, auxiliary action, compose, integrate, then rebuild the
/// graph and record cost and connectivity of the new state.
pub fn run_from_state<F>(
    params: &SimParams,
    controller: &dyn Controller,
    initial: SwarmState,
    options: &EpisodeOptions,
    mut observer: F,
) -> Result<EpisodeRecord>
where
    F: FnMut(&StepSnapshot<'_>),
{
    params.validate()?;
    if initial.len() != params.n_agents {
        return Err(FlockError::LengthMismatch {
            expected: params.n_agents,
            got: initial.len(),
        });
    }
    let n_steps = params.n_steps;
    let lambda = params.lambda();
    let initial_fingerprint = initial.fingerprint();

    let mut per_step_cost_terms = Vec::with_capacity(n_steps);
    let mut connectivity_history = Vec::with_capacity(n_steps);
    let mut score_history =
        (options.score_sampling != ScoreSampling::Off).then(Vec::<ScoreSample>::new);

    let mut state = initial;
    let mut graph = build_graph_grid(&state, params.comm_radius);

    for n in 0..n_steps {
        let at = state.step_index;
        let sampled = options.score_sampling.includes(n, n_steps);
        let scores = (params.aux_enabled || sampled).then(|| compute_confscores(&state, &graph));
        if let (true, Some(history), Some(scores)) = (sampled, score_history.as_mut(), &scores) {
            history.push(ScoreSample {
                step: at,
                positions: state.positions().collect(),
                scores: scores.clone(),
            });
        }

        let base = controller
            .control(&state, &graph)
            .map_err(|e| e.at_step(at))?;
        let action = match (&scores, params.aux_enabled) {
            (Some(scores), true) => {
                let aux = assistant_acceleration(&state, &graph, scores, params.top_k, lambda);
                compose(&base, &aux).map_err(|e| e.at_step(at))?
            }
            _ => base,
        };

        state = step(&state, &action, params.sampling_time).map_err(|e| e.at_step(at))?;
        graph = build_graph_grid(&state, params.comm_radius);

        let cost_term = velocity_variance_term(&state);
        let connectivity = Connectivity::of(&graph);
        per_step_cost_terms.push(cost_term);
        connectivity_history.push(connectivity);
        observer(&StepSnapshot {
            state: &state,
            graph: &graph,
            cost_term,
            connectivity,
        });
    }

    Ok(EpisodeRecord {
        params: params.clone(),
        controller: controller.name().to_string(),
        lambda,
        initial_fingerprint,
        per_step_cost_terms,
        final_state: state,
        score_history,
        connectivity_history,
    })
}
