//! Baseline flocking controllers and composition with the auxiliary action.
//!
//! Both baselines combine velocity alignment with an artificial potential
//! `U(r) = 1/|r|² + ln |r|²`, which repels below 1 m and attracts beyond it.
//! The local controller sums over graph neighbors only; the global one sums
//! over every other agent.

use rayon::prelude::*;

use crate::error::{FlockError, Result};
use crate::graph::NeighborGraph;
use crate::types::{ControlAction, SwarmState, Vec2};

/// Distances are clamped up to this before evaluating the gradient (m).
pub const MIN_POTENTIAL_DISTANCE: f64 = 0.01;
/// Gradient magnitudes are clamped down to this (m/s²).
pub const MAX_POTENTIAL_GRADIENT: f64 = 100.0;

/// The pairwise potential at displacement `r`, unclamped.
pub fn potential(r: Vec2) -> f64 {
    let d2 = r.norm_squared();
    1.0 / d2 + d2.ln()
}

/// Gradient of [`potential`] with respect to `r`: `(-2/|r|⁴ + 2/|r|²) r`.
///
/// `|r|` is clamped below at [`MIN_POTENTIAL_DISTANCE`] and the result's
/// magnitude is clamped at [`MAX_POTENTIAL_GRADIENT`].
pub fn potential_gradient(r: Vec2) -> Result<Vec2> {
    let d2 = r.norm_squared();
    if d2 == 0.0 {
        return Err(FlockError::ZeroDisplacement);
    }
    let min_d2 = MIN_POTENTIAL_DISTANCE * MIN_POTENTIAL_DISTANCE;
    let (r, d2) = if d2 < min_d2 {
        (r * (MIN_POTENTIAL_DISTANCE / d2.sqrt()), min_d2)
    } else {
        (r, d2)
    };
    let g = r * (-2.0 / (d2 * d2) + 2.0 / d2);
    let mag2 = g.norm_squared();
    Ok(if mag2 > MAX_POTENTIAL_GRADIENT * MAX_POTENTIAL_GRADIENT {
        g * (MAX_POTENTIAL_GRADIENT / mag2.sqrt())
    } else {
        g
    })
}

fn pair_term(state: &SwarmState, i: usize, j: usize) -> Result<Vec2> {
    let (ai, aj) = (&state.agents[i], &state.agents[j]);
    let r = ai.position - aj.position;
    let grad =
        potential_gradient(r).map_err(|_| FlockError::CoincidentAgents(i.min(j), i.max(j)))?;
    Ok(-(ai.velocity - aj.velocity) - grad)
}

/// Swarms at least this large evaluate agents in parallel. Each agent's sum
/// keeps its sequential order, so results do not depend on threading.
const PARALLEL_MIN_AGENTS: usize = 64;

fn tanner_over<I>(state: &SwarmState, others: impl Fn(usize) -> I + Sync) -> Result<ControlAction>
where
    I: Iterator<Item = usize>,
{
    let agent = |i: usize| -> Result<Vec2> {
        let mut u = Vec2::ZERO;
        for j in others(i) {
            u += pair_term(state, i, j)?;
        }
        Ok(u)
    };
    let accels = if state.len() >= PARALLEL_MIN_AGENTS {
        (0..state.len())
            .into_par_iter()
            .map(agent)
            .collect::<Result<Vec<_>>>()?
    } else {
        (0..state.len()).map(agent).collect::<Result<Vec<_>>>()?
    };
    Ok(ControlAction { accels })
}

/// Decentralized alignment-plus-potential controller over graph neighbors.
/// Agents without neighbors get zero control and coast.
pub fn tanner_local(state: &SwarmState, graph: &NeighborGraph) -> Result<ControlAction> {
    tanner_over(state, |i| graph.neighbors(i).iter().copied())
}

/// Centralized version: every other agent counts, regardless of distance.
pub fn tanner_global(state: &SwarmState) -> Result<ControlAction> {
    let n = state.len();
    tanner_over(state, |i| (0..n).filter(move |&j| j != i))
}

/// Total action `u + ū`.
pub fn compose(base: &ControlAction, aux: &ControlAction) -> Result<ControlAction> {
    if base.len() != aux.len() {
        return Err(FlockError::LengthMismatch {
            expected: base.len(),
            got: aux.len(),
        });
    }
    Ok(ControlAction {
        accels: base
            .accels
            .iter()
            .zip(&aux.accels)
            .map(|(&u, &a)| u + a)
            .collect(),
    })
}

/// A base flocking policy: maps the swarm and its communication graph to one
/// acceleration per agent.
pub trait Controller: Send + Sync {
    fn name(&self) -> &'static str;

    fn control(&self, state: &SwarmState, graph: &NeighborGraph) -> Result<ControlAction>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LocalController;

impl Controller for LocalController {
    fn name(&self) -> &'static str {
        "local"
    }

    fn control(&self, state: &SwarmState, graph: &NeighborGraph) -> Result<ControlAction> {
        tanner_local(state, graph)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GlobalController;

impl Controller for GlobalController {
    fn name(&self) -> &'static str {
        "global"
    }

    fn control(&self, state: &SwarmState, _graph: &NeighborGraph) -> Result<ControlAction> {
        tanner_global(state)
    }
}

/// Zero control: agents drift ballistically.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoController;

impl Controller for NoController {
    fn name(&self) -> &'static str {
        "none"
    }

    fn control(&self, state: &SwarmState, _graph: &NeighborGraph) -> Result<ControlAction> {
        Ok(ControlAction::zeros(state.len()))
    }
}

pub const CONTROLLER_NAMES: [&str; 3] = ["local", "global", "none"];

pub fn controller_by_name(name: &str) -> Result<Box<dyn Controller>> {
    match name {
        "local" => Ok(Box::new(LocalController)),
        "global" => Ok(Box::new(GlobalController)),
        "none" => Ok(Box::new(NoController)),
        other => Err(FlockError::UnknownController(other.to_string())),
    }
}
