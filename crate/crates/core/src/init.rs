//! Seeded swarm initialization.
//!
//! Randomness comes from ChaCha8 seeded with `SimParams::seed`. Positions are
//! drawn from stream 0 and velocities from stream 1, so the velocity draw does
//! not depend on how many position candidates were rejected.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FlockError, Result};
use crate::params::SimParams;
use crate::types::{SwarmState, Vec2};

/// Rejection-sampling budget per agent before giving up on a too-dense box.
pub const PLACEMENT_ATTEMPTS_PER_AGENT: usize = 10_000;

const POSITION_STREAM: u64 = 0;
const VELOCITY_STREAM: u64 = 1;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Place `params.n_agents` agents uniformly in `[0, init_box_side]²` with every
/// pair at least `init_min_separation` apart, and give each a velocity drawn
/// uniformly from the disk of radius `v_max`.
pub fn init_swarm(params: &SimParams) -> Result<SwarmState> {
    params.validate()?;
    let positions = sample_positions(params)?;
    let velocities = sample_velocities(params.seed, params.n_agents, params.v_max);
    SwarmState::from_parts(&positions, &velocities)
}

fn sample_positions(params: &SimParams) -> Result<Vec<Vec2>> {
    let n = params.n_agents;
    let side = params.init_box_side;
    let min_sq = params.init_min_separation * params.init_min_separation;
    let budget = PLACEMENT_ATTEMPTS_PER_AGENT * n;
    let mut rng = rng_for(params.seed, POSITION_STREAM);

    let mut placed: Vec<Vec2> = Vec::with_capacity(n);
    let mut attempts = 0;
    while placed.len() < n {
        if attempts == budget {
            return Err(FlockError::InitFailure {
                placed: placed.len(),
                wanted: n,
                attempts,
            });
        }
        attempts += 1;
        let candidate = Vec2::new(rng.gen::<f64>() * side, rng.gen::<f64>() * side);
        if placed
            .iter()
            .all(|&p| (p - candidate).norm_squared() >= min_sq)
        {
            placed.push(candidate);
        }
    }
    Ok(placed)
}

fn sample_velocities(seed: u64, n: usize, v_max: f64) -> Vec<Vec2> {
    let mut rng = rng_for(seed, VELOCITY_STREAM);
    (0..n)
        .map(|_| {
            let r = v_max * rng.gen::<f64>().sqrt();
            let theta = TAU * rng.gen::<f64>();
            Vec2::new(r * theta.cos(), r * theta.sin())
        })
        .collect()
}

impl SwarmState {
    /// Convenience: `init_swarm` for these parameters.
    pub fn random(params: &SimParams) -> Result<Self> {
        init_swarm(params)
    }
}
