//! Planar vectors, agent and swarm state, and control actions.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{FlockError, Result};

/// A 2D vector. Used for positions (m), velocities (m/s) and accelerations (m/s²).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Position and velocity of a single agent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub position: Vec2,
    pub velocity: Vec2,
}

impl AgentState {
    pub const fn new(position: Vec2, velocity: Vec2) -> Self {
        Self { position, velocity }
    }
}

/// The full swarm at discrete time index `step_index`. Agent identity is its index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmState {
    pub agents: Vec<AgentState>,
    pub step_index: usize,
}

impl SwarmState {
    pub fn new(agents: Vec<AgentState>) -> Self {
        Self {
            agents,
            step_index: 0,
        }
    }

    /// Build a state from parallel position/velocity slices.
    pub fn from_parts(positions: &[Vec2], velocities: &[Vec2]) -> Result<Self> {
        if positions.len() != velocities.len() {
            return Err(FlockError::LengthMismatch {
                expected: positions.len(),
                got: velocities.len(),
            });
        }
        Ok(Self::new(
            positions
                .iter()
                .zip(velocities)
                .map(|(&p, &v)| AgentState::new(p, v))
                .collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = Vec2> + Clone + '_ {
        self.agents.iter().map(|a| a.position)
    }

    pub fn velocities(&self) -> impl Iterator<Item = Vec2> + Clone + '_ {
        self.agents.iter().map(|a| a.velocity)
    }

    /// Multiply every velocity by `factor`, leaving positions alone.
    pub fn with_scaled_velocities(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for a in &mut out.agents {
            a.velocity = a.velocity * factor;
        }
        out
    }

    /// FNV-1a over the bit patterns of every coordinate. Stable across builds
    /// and platforms, so it can tag paired runs in sweep output.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut feed = |v: f64| {
            for b in v.to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(PRIME);
            }
        };
        for a in &self.agents {
            feed(a.position.x);
            feed(a.position.y);
            feed(a.velocity.x);
            feed(a.velocity.y);
        }
        h
    }
}

/// Per-agent accelerations (m/s²), indexed like the swarm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlAction {
    pub accels: Vec<Vec2>,
}

impl ControlAction {
    pub fn zeros(n: usize) -> Self {
        Self {
            accels: vec![Vec2::ZERO; n],
        }
    }

    pub fn len(&self) -> usize {
        self.accels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accels.is_empty()
    }

    /// Index of the first agent with a non-finite component, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.accels.iter().position(|a| !a.is_finite())
    }
}

impl From<Vec<Vec2>> for ControlAction {
    fn from(accels: Vec<Vec2>) -> Self {
        Self { accels }
    }
}
