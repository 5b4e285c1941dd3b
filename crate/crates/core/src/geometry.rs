//! 2D vectors and circular (angle) arithmetic.
//!
//! Headings live on (−π, π]. All angle blending in the model goes through
//! [`wrap_angle`] / [`angle_diff`] so that arithmetic near the wrap point is
//! shortest-arc rather than linear.

use serde::{Deserialize, Serialize};

use crate::real::Real;

/// A 2D point or displacement, room-centered meters unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2<F> {
    pub x: F,
    pub y: F,
}

impl<F: Real> Vec2<F> {
    pub fn new(x: F, y: F) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self {
            x: F::zero(),
            y: F::zero(),
        }
    }

    pub fn norm(self) -> F {
        self.norm_sq().sqrt()
    }

    pub fn norm_sq(self) -> F {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Self) -> F {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: Self) -> F {
        (self - other).norm_sq()
    }

    /// Unit vector pointing along `angle`.
    pub fn from_angle(angle: F) -> Self {
        Self {
            x: angle.cos(),
            y: angle.sin(),
        }
    }

    pub fn scale(self, s: F) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
        }
    }
}

impl<F: Real> std::ops::Add for Vec2<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
        }
    }
}

impl<F: Real> std::ops::Sub for Vec2<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            x: self.x - rhs.x,
            y: self.y - rhs.y,
        }
    }
}

/// Wraps an angle to (−π, π].
pub fn wrap_angle<F: Real>(a: F) -> F {
    let pi = F::pi();
    let two_pi = pi + pi;
    let mut r = a % two_pi;
    if r > pi {
        r -= two_pi;
    } else if r <= -pi {
        r += two_pi;
    }
    r
}

/// Shortest-arc signed difference `a − b`, in (−π, π].
pub fn angle_diff<F: Real>(a: F, b: F) -> F {
    wrap_angle(a - b)
}

/// Circular mean of a set of angles: atan2 of the mean resultant vector.
///
/// Returns `None` when the resultant vanishes (e.g. exactly antipodal
/// inputs), in which case no direction is defined.
pub fn circular_mean<F: Real>(angles: impl IntoIterator<Item = F>) -> Option<F> {
    let mut sum_sin = F::zero();
    let mut sum_cos = F::zero();
    let mut n = 0usize;
    for a in angles {
        sum_sin += a.sin();
        sum_cos += a.cos();
        n += 1;
    }
    if n == 0 {
        return None;
    }
    let count = F::from_f64(n as f64);
    let ms = sum_sin / count;
    let mc = sum_cos / count;
    if ms * ms + mc * mc <= F::epsilon() {
        return None;
    }
    Some(wrap_angle(ms.atan2(mc)))
}

/// Norm of the mean unit-heading vector: 1 = aligned, 0 = disordered.
pub fn resultant_length<F: Real>(angles: &[F]) -> Option<F> {
    if angles.is_empty() {
        return None;
    }
    let mut sum_sin = F::zero();
    let mut sum_cos = F::zero();
    for &a in angles {
        sum_sin += a.sin();
        sum_cos += a.cos();
    }
    let count = F::from_f64(angles.len() as f64);
    let ms = sum_sin / count;
    let mc = sum_cos / count;
    Some((ms * ms + mc * mc).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn wrap_keeps_interval_half_open() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert_relative_eq!(wrap_angle(3.0 * PI), PI);
        assert_relative_eq!(wrap_angle(-2.5 * PI), -0.5 * PI);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn angle_diff_is_shortest_arc() {
        assert_relative_eq!(angle_diff(-3.0, 3.0), 2.0 * PI - 6.0, epsilon = 1e-12);
        assert_relative_eq!(angle_diff(3.0, -3.0), -(2.0 * PI - 6.0), epsilon = 1e-12);
        assert_relative_eq!(angle_diff(0.5, 0.2), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn circular_mean_of_two_headings() {
        // atan2(1/2, 1/2) for {0, π/2}
        let m = circular_mean([0.0, PI / 2.0]).unwrap();
        assert_relative_eq!(m, PI / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn circular_mean_degenerate_on_antipodal() {
        assert!(circular_mean([0.0, PI]).is_none());
        assert!(circular_mean(std::iter::empty::<f64>()).is_none());
    }

    #[test]
    fn circular_mean_works_in_f32() {
        let m = circular_mean([0.0f32, std::f32::consts::FRAC_PI_2]).unwrap();
        assert!((m - std::f32::consts::FRAC_PI_4).abs() < 1e-6);
    }

    #[test]
    fn resultant_length_limits() {
        let aligned = vec![1.3; 10];
        assert_relative_eq!(resultant_length(&aligned).unwrap(), 1.0, epsilon = 1e-12);
        let symmetric = [0.0, PI / 2.0, PI, 1.5 * PI];
        assert_relative_eq!(
            resultant_length(&symmetric).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }
}
