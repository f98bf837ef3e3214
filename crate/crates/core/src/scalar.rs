//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the game, belief and learning code is generic over.
///
/// Implemented for `f32` and `f64`. The two associated tolerances are the
/// only precision-dependent constants in the crate.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Slack allowed when validating a probability vector (entries and sum).
    const SIMPLEX_TOL: f64;

    /// Relative gap below which two expected rewards count as tied.
    const TIE_TOL: f64;

    /// Converts an `f64` literal; never fails for the provided impls.
    fn cast(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable")
    }

    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("usize is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const SIMPLEX_TOL: f64 = 1e-9;
    const TIE_TOL: f64 = 1e-12;
}

impl Scalar for f32 {
    const SIMPLEX_TOL: f64 = 1e-4;
    const TIE_TOL: f64 = 1e-5;
}
