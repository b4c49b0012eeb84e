//! Scalar traits the algebra is generic over.
//!
//! [`Scalar`] is the ring-level bound used by quaternion arithmetic and the
//! coefficient calculus of regular series; it is satisfied by `f32`, `f64`
//! and exact rationals. [`Real`] adds the transcendental functions needed for
//! norms, slice decompositions and the exponential.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed};

pub trait Scalar:
    Num + Signed + Copy + PartialOrd + FromPrimitive + Debug + Send + Sync + 'static
{
    /// Absolute tolerance for coefficientwise series equality. Zero for exact types.
    fn coeff_tolerance() -> Self;

    /// Imaginary residues of a symmetrization below this are snapped to zero.
    fn snap_tolerance() -> Self;

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer not representable in scalar type")
    }
}

impl Scalar for f64 {
    fn coeff_tolerance() -> Self {
        1e-13
    }
    fn snap_tolerance() -> Self {
        1e-13
    }
}

impl Scalar for f32 {
    fn coeff_tolerance() -> Self {
        1e-5
    }
    fn snap_tolerance() -> Self {
        1e-5
    }
}

impl Scalar for Ratio<i64> {
    fn coeff_tolerance() -> Self {
        Ratio::from_integer(0)
    }
    fn snap_tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

impl Scalar for Ratio<i128> {
    fn coeff_tolerance() -> Self {
        Ratio::from_integer(0)
    }
    fn snap_tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

/// Floating point scalars.
pub trait Real: Scalar + Float + FloatConst {
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal not representable")
    }
}

impl Real for f64 {}
impl Real for f32 {}
