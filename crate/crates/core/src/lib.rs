//! Deterministic, batch-parallel simulator of hybrid individual/collective
//! agent motion in a bounded room surrounded by beacons, plus a
//! likelihood-free (ABC) inference and calibration toolkit over the model's
//! four governing parameters.
//!
//! The math kernels (geometry, dynamics, observables, summaries) are generic
//! over the scalar type via [`real::Real`]; the inference stack and all file
//! formats are pinned to `f64` through the aliases below.

pub mod diagnostics;
pub mod dynamics;
pub mod env;
pub mod geometry;
pub mod inference;
pub mod io;
pub mod observables;
pub mod params;
pub mod prior;
pub mod real;
pub mod seeds;
pub mod summaries;

/// Scalar type used by the file formats and the inference stack.
pub type Scalar = f64;

pub type Params = params::GlobalParams<Scalar>;
pub type Fixed = params::FixedParams<Scalar>;
pub type Config = params::SimConfig<Scalar>;
pub type Room = env::RoomConfig<Scalar>;
pub type Beacons = env::BeaconSet<Scalar>;
pub type Point = geometry::Vec2<Scalar>;
pub type State = dynamics::WorldState<Scalar>;
pub type Trajectory = observables::TrajectorySet<Scalar>;
pub type Augmented = observables::AugmentedSet<Scalar>;
pub type Summary = summaries::SummaryVector<Scalar>;
