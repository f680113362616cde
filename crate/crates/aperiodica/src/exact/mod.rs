//! Exact scalar arithmetic for the three arithmetic worlds of the
//! toolkit: Z[tau], the icosian quaternions, and truncated p-adic
//! integers, plus arbitrary-precision rationals.

pub mod golden;
pub mod icosian;
pub mod intmat;
pub mod padic;

pub use golden::{parse_golden, GoldenInt, GoldenRational, TAU_F64};
pub use icosian::{icosian_generators, IcosianQuaternion};
pub use padic::{padic_distance, padic_valuation, PAdicApprox};

/// Arbitrary-precision rational numbers (exact field arithmetic).
pub type Rational = num_rational::BigRational;
