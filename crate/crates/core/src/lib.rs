//! Exact arithmetic on weighted projective spaces over the rationals.
//!
//! Every height in this crate is a [`FormalLog`]: a finite rational
//! combination of logarithms of primes. Values are compared exactly, so
//! identities between heights are checked by equality of coefficient maps
//! rather than by floating point tolerance.
//!
//! Module map:
//! - [`exactnum`]: factorization, valuations, prime-to-S parts, `FormalLog`.
//! - [`wspace`]: weight vectors, reduction, well-formedness, singular locus.
//! - [`wpoint`]: points, `wgcd`, normalization, canonical forms, Veronese map.
//! - [`wheight`]: weighted heights, generalized gcds, S-split heights.
//! - [`wpoly`]: weighted homogeneous polynomials and subscheme heights.
//! - [`search`]: complete enumeration of points of bounded weighted height.
//! - [`vojtalab`]: empirical scans of the gcd bound for subschemes.

pub mod error;
pub mod exactnum;
pub mod search;
pub mod vojtalab;
pub mod wheight;
pub mod wpoint;
pub mod wpoly;
pub mod wspace;

pub use error::{Error, Result};
pub use exactnum::{FormalLog, Place, Prime, PrimeFactorization};
pub use wpoint::WPoint;
pub use wpoly::{SubschemeSpec, WPoly};
pub use wspace::WeightVector;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
