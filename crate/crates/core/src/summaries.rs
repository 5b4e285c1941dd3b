//! Fixed-length summary statistics for ABC distance computation.
//!
//! This replaces a learned summary network with hand-crafted statistics and
//! is the artifact's largest methodological substitution. Each entry targets
//! a parameter's signature: mean speed → v; polarization level/variance and
//! angular-velocity statistics → η and w; neighbor count/distance statistics
//! → r. The entry list and its order are part of the file-format contract.

use serde::{Deserialize, Serialize};

use crate::geometry::resultant_length;
use crate::observables::AugmentedSet;
use crate::real::Real;

#[derive(Debug, thiserror::Error)]
pub enum SummaryError {
    #[error("polarization of an empty heading list is undefined")]
    EmptyHeadings,
    #[error("standardization needs a batch of at least 2 summaries, got {0}")]
    BatchTooSmall(usize),
}

/// Names of the summary entries, in vector order.
pub const SUMMARY_LABELS: [&str; 14] = [
    "polarization_mean",
    "polarization_var",
    "speed_mean",
    "neighbor_count_mean",
    "neighbor_count_var",
    "neighbor_dist_mean",
    "neighbor_dist_var",
    "angular_speed_mean",
    "angular_velocity_var",
    "neighbor_delta_abs_mean",
    "polarization_acf_lag1",
    "polarization_acf_lag10",
    "beacon_dist_mean",
    "boundary_fraction",
];

pub const SUMMARY_LEN: usize = SUMMARY_LABELS.len();

/// A fixed-length statistic vector; entry meanings given by
/// [`SUMMARY_LABELS`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryVector<F> {
    pub values: Vec<F>,
}

impl<F: Real> SummaryVector<F> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Vicsek order parameter: norm of the mean unit-heading vector.
pub fn polarization<F: Real>(headings: &[F]) -> Result<F, SummaryError> {
    resultant_length(headings).ok_or(SummaryError::EmptyHeadings)
}

fn mean<F: Real>(xs: &[F]) -> F {
    if xs.is_empty() {
        return F::zero();
    }
    let mut s = F::zero();
    for &x in xs {
        s += x;
    }
    s / F::from_f64(xs.len() as f64)
}

/// Population variance (divides by n).
fn variance<F: Real>(xs: &[F]) -> F {
    if xs.len() < 2 {
        return F::zero();
    }
    let m = mean(xs);
    let mut s = F::zero();
    for &x in xs {
        let d = x - m;
        s += d * d;
    }
    s / F::from_f64(xs.len() as f64)
}

/// Sample autocorrelation of `xs` at `lag`; 0 for constant or too-short
/// series so that summary entries stay finite.
fn autocorrelation<F: Real>(xs: &[F], lag: usize) -> F {
    if xs.len() <= lag {
        return F::zero();
    }
    let m = mean(xs);
    let mut denom = F::zero();
    for &x in xs {
        let d = x - m;
        denom += d * d;
    }
    if denom <= F::zero() {
        return F::zero();
    }
    let mut num = F::zero();
    for t in 0..xs.len() - lag {
        num += (xs[t] - m) * (xs[t + lag] - m);
    }
    num / denom
}

/// Compresses an augmented trajectory into the 14-entry summary vector.
pub fn summarize<F: Real>(aug: &AugmentedSet<F>) -> SummaryVector<F> {
    let traj = &aug.base;
    let a_len = traj.num_agents();
    let t_len = traj.num_steps();
    let dt = traj.meta.sim.dt;

    // Per-step polarization series.
    let mut heading_buf = vec![F::zero(); a_len];
    let mut pol = Vec::with_capacity(t_len);
    for t in 0..t_len {
        for (a, h) in heading_buf.iter_mut().enumerate() {
            *h = traj.heading(a, t);
        }
        pol.push(resultant_length(&heading_buf).expect("at least one agent"));
    }

    // Per-step mean agent speed from consecutive displacements.
    let mut speed = Vec::with_capacity(t_len.saturating_sub(1));
    for t in 0..t_len.saturating_sub(1) {
        let mut s = F::zero();
        for a in 0..a_len {
            s += traj.pos(a, t + 1).dist(traj.pos(a, t)) / dt;
        }
        speed.push(s / F::from_f64(a_len as f64));
    }

    // Neighbor counts over all agents and steps.
    let counts: Vec<F> = traj
        .neighbor_count
        .iter()
        .map(|&c| F::from_f64(f64::from(c)))
        .collect();

    // Neighbor distances where neighbors are present.
    let present: Vec<F> = traj
        .neighbor_count
        .iter()
        .zip(&traj.neighbor_dist)
        .filter(|(&c, _)| c > 0)
        .map(|(_, &d)| d)
        .collect();

    let abs_ang: Vec<F> = aug.angular_velocity.iter().map(|v| v.abs()).collect();
    let abs_delta: Vec<F> = aug
        .neighbor_delta
        .iter()
        .map(|&d| F::from_f64(f64::from(d.abs())))
        .collect();

    // Mean distance to the assigned beacon, averaged over steps.
    let assigned: Vec<(usize, usize)> = traj
        .meta
        .assigned
        .iter()
        .enumerate()
        .filter_map(|(a, b)| b.map(|b| (a, b)))
        .collect();
    let beacon_dist_mean = if assigned.is_empty() {
        F::zero()
    } else {
        let mut total = F::zero();
        for t in 0..t_len {
            let mut s = F::zero();
            for &(a, b) in &assigned {
                s += traj.pos(a, t).dist(traj.meta.beacons.positions[b]);
            }
            total += s / F::from_f64(assigned.len() as f64);
        }
        total / F::from_f64(t_len as f64)
    };

    // Fraction of steps with any agent pinned on the room boundary.
    let room = &traj.meta.room;
    let mut boundary_steps = 0usize;
    for t in 0..t_len {
        if (0..a_len).any(|a| room.on_boundary(traj.pos(a, t))) {
            boundary_steps += 1;
        }
    }
    let boundary_fraction = F::from_f64(boundary_steps as f64 / t_len as f64);

    SummaryVector {
        values: vec![
            mean(&pol),
            variance(&pol),
            mean(&speed),
            mean(&counts),
            variance(&counts),
            mean(&present),
            variance(&present),
            mean(&abs_ang),
            variance(&aug.angular_velocity),
            mean(&abs_delta),
            autocorrelation(&pol, 1),
            autocorrelation(&pol, 10),
            beacon_dist_mean,
            boundary_fraction,
        ],
    }
}

/// Per-entry robust location/scale transform fitted by [`standardize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTransform {
    pub location: Vec<f64>,
    pub scale: Vec<f64>,
}

/// Floor applied to the MAD scale so constant entries standardize to zero.
pub const SCALE_FLOOR: f64 = 1e-12;

impl SummaryTransform {
    pub fn apply(&self, v: &SummaryVector<f64>) -> SummaryVector<f64> {
        debug_assert_eq!(v.len(), self.location.len());
        SummaryVector {
            values: v
                .values
                .iter()
                .zip(self.location.iter().zip(&self.scale))
                .map(|(&x, (&loc, &scale))| (x - loc) / scale)
                .collect(),
        }
    }
}

fn median_inplace(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("summary entries are finite"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Centers each entry by the batch median and scales by the batch MAD
/// (floored at [`SCALE_FLOOR`]). Robust rather than mean/std: prior-predictive
/// summaries are heavy-tailed under the LogNormal sensing radius.
pub fn standardize(
    batch: &[SummaryVector<f64>],
) -> Result<(Vec<SummaryVector<f64>>, SummaryTransform), SummaryError> {
    if batch.len() < 2 {
        return Err(SummaryError::BatchTooSmall(batch.len()));
    }
    let width = batch[0].len();
    let mut location = Vec::with_capacity(width);
    let mut scale = Vec::with_capacity(width);
    let mut column = vec![0.0; batch.len()];
    for entry in 0..width {
        for (i, summary) in batch.iter().enumerate() {
            column[i] = summary.values[entry];
        }
        let med = median_inplace(&mut column);
        for (i, summary) in batch.iter().enumerate() {
            column[i] = (summary.values[entry] - med).abs();
        }
        let mad = median_inplace(&mut column);
        location.push(med);
        scale.push(mad.max(SCALE_FLOOR));
    }
    let transform = SummaryTransform { location, scale };
    let standardized = batch.iter().map(|v| transform.apply(v)).collect();
    Ok((standardized, transform))
}
