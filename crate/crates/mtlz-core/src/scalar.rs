//! Scalar abstraction for the numeric subsystem. The combinatorial side
//! of the crate is integer-only; everything touching forms, gamma
//! magnitudes or Hamiltonians is generic over `Real` with `f64` aliases
//! exported from the crate root.

use num_traits::{Float, FromPrimitive};

pub trait Real:
    Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + std::iter::Sum + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + std::fmt::Debug
        + std::fmt::Display
        + std::iter::Sum
        + Send
        + Sync
        + 'static
{
}
