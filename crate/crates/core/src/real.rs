//! Scalar abstraction for the simulation math.
//!
//! Everything geometric (angles, positions, update rules, summary statistics)
//! is generic over [`Real`] so the same kernels run in `f32` or `f64`. The
//! crate-root aliases pin `f64` for the file formats and the inference stack.

use rand::distr::uniform::SampleUniform;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Floating-point scalar usable by the simulation kernels.
pub trait Real:
    num_traits::Float
    + num_traits::NumAssign
    + SampleUniform
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    fn pi() -> Self;

    /// One draw from N(0, 1) using this scalar's native sampler.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Conversion from `f64` for constants and configuration values.
    fn from_f64(x: f64) -> Self;

    fn to_f64(self) -> f64;
}

impl Real for f32 {
    fn pi() -> Self {
        std::f32::consts::PI
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn from_f64(x: f64) -> Self {
        x as f32
    }

    fn to_f64(self) -> f64 {
        f64::from(self)
    }
}

impl Real for f64 {
    fn pi() -> Self {
        std::f64::consts::PI
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }
}
