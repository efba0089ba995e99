//! Numeric abstraction shared by every model in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::{LinalgScalar, ScalarOperand};
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the models are computed in.
///
/// Implemented for `f32` and `f64`. All random draws are made in `f64` and
/// converted, so a given seed produces the same stream for both precisions.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + LinalgScalar
    + ScalarOperand
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Values outside the target range saturate.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count.
    fn count(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax<T: Scalar>(row: impl IntoIterator<Item = T>) -> usize {
    let mut best = 0;
    let mut best_val = T::neg_infinity();
    for (idx, v) in row.into_iter().enumerate() {
        if v > best_val {
            best = idx;
            best_val = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_index_on_ties() {
        assert_eq!(argmax([0.25f64, 0.25, 0.25, 0.25]), 0);
        assert_eq!(argmax([0.1f64, 0.4, 0.4, 0.1]), 1);
        assert_eq!(argmax([0.1f32, 0.2, 0.7]), 2);
    }

    #[test]
    fn literals_round_trip() {
        assert_eq!(f64::lit(0.05), 0.05);
        assert_eq!(f32::lit(0.5), 0.5f32);
        assert_eq!(f64::count(800), 800.0);
    }
}
