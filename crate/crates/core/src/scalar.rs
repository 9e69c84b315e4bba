//! Scalar trait shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type the matrix profile, DTW and noise code run on.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Population standard deviation below which a window counts as constant.
    fn degeneracy_epsilon() -> Self;

    /// Lossy conversion from `f64`; every `f64` maps to some value of `Self`.
    fn of(value: f64) -> Self {
        Self::from_f64(value).unwrap_or_else(Self::nan)
    }

    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).unwrap_or_else(Self::infinity)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn degeneracy_epsilon() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn degeneracy_epsilon() -> Self {
        1e-6
    }
}
