//! Real scalar abstraction shared by the spectrum algebra.
//!
//! Everything that only manipulates probability vectors is written against
//! [`Scalar`], so the same code runs in `f32` and `f64`. Tolerances scale with
//! the precision of the type: the `f64` values are the contract values used
//! throughout the test suite.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Largest |Σp − 1| that is silently renormalized instead of rejected.
    fn normalization_slack() -> Self;
    /// Slack applied to partial-sum comparisons (majorization and friends).
    fn partial_sum_tol() -> Self;
    /// Ratios closer than this are treated as ties by the staircase search.
    fn ratio_tol() -> Self;
    /// Slack for range checks on fidelities.
    fn range_tol() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Scalar for f64 {
    fn normalization_slack() -> Self {
        1e-6
    }
    fn partial_sum_tol() -> Self {
        1e-10
    }
    fn ratio_tol() -> Self {
        1e-12
    }
    fn range_tol() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn normalization_slack() -> Self {
        1e-4
    }
    fn partial_sum_tol() -> Self {
        1e-5
    }
    fn ratio_tol() -> Self {
        1e-6
    }
    fn range_tol() -> Self {
        1e-6
    }
}
