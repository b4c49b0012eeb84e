//! Quaternionic slice regular functions and quaternionic Laplace transforms.
//!
//! The crate is layered:
//!
//! * [`quat`]: quaternion arithmetic, slice coordinates and the exponential,
//!   generic over the scalar type.
//! * [`series`]: exact coefficient calculus of left/right regular power
//!   series (regular product, conjugate, symmetrization, reciprocal, `eta`).
//! * [`slice_fn`]: evaluable regular functions in tensor form: four
//!   intrinsic holomorphic stems paired with the basis `1, i, j, k`.
//! * [`regularity`]: finite-difference verifiers for left/right regularity.
//! * [`laplace`]: left and right quaternionic Laplace transforms evaluated
//!   by adaptive quadrature, with the operational calculus on top.
//! * [`verify`]: randomized property suites driven by the CLI.

pub mod error;
pub mod laplace;
pub mod probe;
pub mod quadrature;
pub mod quat;
pub mod region;
pub mod regularity;
pub mod scalar;
pub mod series;
pub mod slice_fn;
pub mod stem;
pub mod time_fn;
pub mod verify;

use num_rational::Ratio;

pub use error::{Error, Result};
pub use quat::{slice_decompose, slice_embed, ImaginaryUnit, Quaternion, SliceCoordinates};
pub use region::Region;
pub use scalar::{Real, Scalar};
pub use series::{RegularSeries, Side};
pub use slice_fn::SliceRegularFunction;
pub use stem::IntrinsicStem;
pub use time_fn::TimeDomainFunction;

pub type Quat = Quaternion<f64>;
pub type Quat32 = Quaternion<f32>;
pub type RationalQuat = Quaternion<Ratio<i64>>;

pub type Series = RegularSeries<f64>;
pub type Series32 = RegularSeries<f32>;
pub type RationalSeries = RegularSeries<Ratio<i64>>;

pub type SliceCoords = SliceCoordinates<f64>;
pub type Unit = ImaginaryUnit<f64>;
