//! Room geometry, beacon placement and detection, boundary confinement.
//!
//! Coordinates are room-centered: the room is the axis-aligned rectangle
//! [−width/2, width/2] × [−height/2, height/2] and beacons lie outside it
//! (the room interior holds no virtual content) but inside the detection
//! range of the room center.

use rand::distr::Uniform;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Vec2;
use crate::real::Real;

#[derive(Debug, thiserror::Error)]
pub enum EnvError {
    #[error("invalid room: {0}")]
    InvalidRoom(String),
    #[error("beacon placement failed: annular region outside the room is too thin")]
    PlacementFailed,
}

/// Room footprint and beacon detection range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoomConfig<F> {
    pub width: F,
    pub height: F,
    /// Detection range R_M, measured from the room center.
    pub detection_range: F,
    /// Position of the room in the world frame. Stationary over a
    /// finite-horizon run; kept for format compatibility.
    pub world_position: Vec2<F>,
}

impl<F: Real> Default for RoomConfig<F> {
    fn default() -> Self {
        Self {
            width: F::from_f64(10.0),
            height: F::from_f64(10.0),
            detection_range: F::from_f64(20.0),
            world_position: Vec2::zero(),
        }
    }
}

impl<F: Real> RoomConfig<F> {
    pub fn validate(&self) -> Result<(), EnvError> {
        if !(self.width > F::zero() && self.width.is_finite()) {
            return Err(EnvError::InvalidRoom(format!(
                "width must be > 0, got {}",
                self.width
            )));
        }
        if !(self.height > F::zero() && self.height.is_finite()) {
            return Err(EnvError::InvalidRoom(format!(
                "height must be > 0, got {}",
                self.height
            )));
        }
        let half_max = self.width.max(self.height) / F::from_f64(2.0);
        if !(self.detection_range > half_max) {
            return Err(EnvError::InvalidRoom(format!(
                "detection_range must exceed max(width, height)/2 = {half_max}, got {}",
                self.detection_range
            )));
        }
        Ok(())
    }

    pub fn half_width(&self) -> F {
        self.width / F::from_f64(2.0)
    }

    pub fn half_height(&self) -> F {
        self.height / F::from_f64(2.0)
    }

    /// True if `p` lies strictly outside the room rectangle.
    pub fn is_outside(&self, p: Vec2<F>) -> bool {
        p.x.abs() > self.half_width() || p.y.abs() > self.half_height()
    }

    /// True if `p` lies on the rectangle boundary (exactly on a clamped wall).
    pub fn on_boundary(&self, p: Vec2<F>) -> bool {
        p.x.abs() == self.half_width() || p.y.abs() == self.half_height()
    }

    pub fn diagonal(&self) -> F {
        (self.width * self.width + self.height * self.height).sqrt()
    }
}

/// Room-centered beacon positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeaconSet<F> {
    pub positions: Vec<Vec2<F>>,
}

impl<F: Real> BeaconSet<F> {
    pub fn new(positions: Vec<Vec2<F>>) -> Self {
        Self { positions }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Samples `count` beacons uniformly (by rejection) from the region outside
/// the room rectangle and within detection range of the room center.
pub fn place_beacons<F: Real, R: Rng + ?Sized>(
    room: &RoomConfig<F>,
    count: usize,
    rng: &mut R,
) -> Result<BeaconSet<F>, EnvError> {
    room.validate()?;
    let range = room.detection_range;
    let ux = Uniform::new_inclusive(-range, range)
        .map_err(|_| EnvError::InvalidRoom("detection_range is not finite".into()))?;
    let mut positions = Vec::with_capacity(count);
    // Acceptance probability is bounded below by the room-invariant
    // R_M > max(w,h)/2, but cap the rejection loop anyway.
    let max_attempts = 10_000usize.saturating_mul(count.max(1));
    let mut attempts = 0;
    while positions.len() < count {
        if attempts >= max_attempts {
            return Err(EnvError::PlacementFailed);
        }
        attempts += 1;
        let p = Vec2::new(rng.sample(&ux), rng.sample(&ux));
        if room.is_outside(p) && p.norm() <= range {
            positions.push(p);
        }
    }
    Ok(BeaconSet::new(positions))
}

/// Indices of beacons strictly within the room's detection range.
pub fn detect_beacons<F: Real>(beacons: &BeaconSet<F>, room: &RoomConfig<F>) -> Vec<usize> {
    beacons
        .positions
        .iter()
        .enumerate()
        .filter(|(_, p)| p.norm() < room.detection_range)
        .map(|(i, _)| i)
        .collect()
}

/// Closest detected beacon to `agent_pos`; ties break to the lowest index.
/// `None` when nothing is detected (callers fall back to internal influence).
pub fn nearest_beacon<F: Real>(
    agent_pos: Vec2<F>,
    beacons: &BeaconSet<F>,
    detected: &[usize],
) -> Option<usize> {
    let mut best: Option<(usize, F)> = None;
    for &i in detected {
        let d = agent_pos.dist_sq(beacons.positions[i]);
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((i, d)),
        }
    }
    best.map(|(i, _)| i)
}

/// Clamps a position to the room rectangle (sliding-wall confinement).
pub fn confine<F: Real>(pos: Vec2<F>, room: &RoomConfig<F>) -> Vec2<F> {
    let hw = room.half_width();
    let hh = room.half_height();
    Vec2::new(pos.x.max(-hw).min(hw), pos.y.max(-hh).min(hh))
}
