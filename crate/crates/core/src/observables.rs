//! Recorded observables: positions X, headings Θ, neighbor counts N, mean
//! neighbor distances D, plus the augmentation channels derived from them.
//!
//! Arrays are stored flat in agent-major order: entry (a, t) lives at
//! `a * num_steps + t`, matching the row-major layout of the binary format.

use serde::{Deserialize, Serialize};

use crate::env::{BeaconSet, RoomConfig};
use crate::geometry::{angle_diff, Vec2};
use crate::params::SimConfig;
use crate::real::Real;

#[derive(Debug, thiserror::Error)]
pub enum ObservablesError {
    #[error("trajectory too short for augmentation: need at least 2 steps, got {0}")]
    TooShort(usize),
}

/// Static context of a recorded run: configuration, geometry, and the frozen
/// onset beacon assignment (−1 encodes "no beacon in range" on disk).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta<F> {
    pub sim: SimConfig<F>,
    pub room: RoomConfig<F>,
    pub beacons: BeaconSet<F>,
    pub assigned: Vec<Option<usize>>,
}

/// The observable record of one simulation: A agents × T steps.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySet<F> {
    pub meta: TrajectoryMeta<F>,
    pub positions: Vec<Vec2<F>>,
    pub headings: Vec<F>,
    pub neighbor_count: Vec<u32>,
    pub neighbor_dist: Vec<F>,
}

impl<F: Real> TrajectorySet<F> {
    pub fn zeroed(meta: TrajectoryMeta<F>) -> Self {
        let n = meta.sim.num_agents * meta.sim.num_steps;
        Self {
            meta,
            positions: vec![Vec2::zero(); n],
            headings: vec![F::zero(); n],
            neighbor_count: vec![0; n],
            neighbor_dist: vec![F::zero(); n],
        }
    }

    pub fn num_agents(&self) -> usize {
        self.meta.sim.num_agents
    }

    pub fn num_steps(&self) -> usize {
        self.meta.sim.num_steps
    }

    #[inline]
    pub fn idx(&self, agent: usize, step: usize) -> usize {
        debug_assert!(agent < self.num_agents() && step < self.num_steps());
        agent * self.num_steps() + step
    }

    pub fn pos(&self, agent: usize, step: usize) -> Vec2<F> {
        self.positions[self.idx(agent, step)]
    }

    pub fn heading(&self, agent: usize, step: usize) -> F {
        self.headings[self.idx(agent, step)]
    }

    pub fn ncount(&self, agent: usize, step: usize) -> u32 {
        self.neighbor_count[self.idx(agent, step)]
    }

    pub fn ndist(&self, agent: usize, step: usize) -> F {
        self.neighbor_dist[self.idx(agent, step)]
    }
}

/// Trajectory plus the two augmentation channels (finite differences over
/// time, so both have T−1 columns).
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSet<F> {
    pub base: TrajectorySet<F>,
    /// Wrapped heading differences divided by dt, rad/s; (a, t) at
    /// `a * (T−1) + t`.
    pub angular_velocity: Vec<F>,
    /// Signed change in neighbor count per step.
    pub neighbor_delta: Vec<i32>,
}

impl<F: Real> AugmentedSet<F> {
    pub fn angular_velocity_at(&self, agent: usize, step: usize) -> F {
        self.angular_velocity[agent * (self.base.num_steps() - 1) + step]
    }

    pub fn neighbor_delta_at(&self, agent: usize, step: usize) -> i32 {
        self.neighbor_delta[agent * (self.base.num_steps() - 1) + step]
    }
}

/// Per-agent neighbor count and arithmetic-mean neighbor distance.
///
/// Neighbors are other agents strictly within `radius`; the mean distance of
/// an isolated agent is reported as 0.
pub fn neighbor_stats<F: Real>(positions: &[Vec2<F>], radius: F) -> (Vec<u32>, Vec<F>) {
    let n = positions.len();
    let mut counts = vec![0u32; n];
    let mut dists = vec![F::zero(); n];
    for i in 0..n {
        let mut sum = F::zero();
        let mut count = 0u32;
        for (j, &pj) in positions.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = positions[i].dist(pj);
            if d < radius {
                sum += d;
                count += 1;
            }
        }
        counts[i] = count;
        dists[i] = if count > 0 {
            sum / F::from_f64(f64::from(count))
        } else {
            F::zero()
        };
    }
    (counts, dists)
}

/// Computes the augmentation channels from the recorded series.
pub fn augment<F: Real>(traj: TrajectorySet<F>) -> Result<AugmentedSet<F>, ObservablesError> {
    let t_len = traj.num_steps();
    if t_len < 2 {
        return Err(ObservablesError::TooShort(t_len));
    }
    let a_len = traj.num_agents();
    let dt = traj.meta.sim.dt;
    let mut angular_velocity = Vec::with_capacity(a_len * (t_len - 1));
    let mut neighbor_delta = Vec::with_capacity(a_len * (t_len - 1));
    for a in 0..a_len {
        for t in 0..t_len - 1 {
            let dtheta = angle_diff(traj.heading(a, t + 1), traj.heading(a, t));
            angular_velocity.push(dtheta / dt);
            neighbor_delta.push(traj.ncount(a, t + 1) as i32 - traj.ncount(a, t) as i32);
        }
    }
    Ok(AugmentedSet {
        base: traj,
        angular_velocity,
        neighbor_delta,
    })
}
