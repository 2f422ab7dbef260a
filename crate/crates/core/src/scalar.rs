//! Numeric abstractions shared by the analytic model and the simulator.
//!
//! The analytic game is written against [`Scalar`], which exact rationals
//! (`num_rational::Ratio<i64>`) satisfy as well as `f32`/`f64`. The
//! stochastic engine additionally needs [`Real`], which is only implemented
//! for the IEEE floating point types.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};
use rand::Rng;

/// Ordered field element usable for currency and probabilities.
pub trait Scalar:
    Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Converts a literal, panicking if the value is not representable.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).unwrap_or_else(|| panic!("{value} is not representable"))
    }

    fn from_count(count: usize) -> Self {
        Self::from_usize(count).unwrap_or_else(|| panic!("{count} is not representable"))
    }

    fn clamp_unit(self) -> Self {
        if self < Self::zero() {
            Self::zero()
        } else if self > Self::one() {
            Self::one()
        } else {
            self
        }
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Floating point scalar that can be drawn uniformly from `[0, 1)`.
pub trait Real: Scalar + Float + Display {
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f32 {
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f32>()
    }
}

impl Real for f64 {
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f64>()
    }
}
