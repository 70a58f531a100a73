//! Exact rational arithmetic, sparse polynomials in `x`, outward-rounded
//! intervals and grid-based monotonicity certificates.

pub mod interval;
pub mod monotone;
pub mod poly;
pub mod rational;

pub use interval::{Interval, Scalar};
pub use monotone::{
    certify_decreasing_pair, dyadic_grid, find_decreasing_pair, validate_grid, CertifiedDecrease,
    DecreasingPair, PrecisionSchedule,
};
pub use poly::{Poly, RationalFunction};
pub use rational::{
    int, parse_rational, pow, rat, sqrt_exact, to_f64, to_fraction, to_scientific, Rational,
};
