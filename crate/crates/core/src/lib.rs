//! Exact computation of group determinant term counts, restricted partition
//! cardinalities and Wolstenholme prime classification.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] builds finite groups as Cayley tables, including every group
//!   of order 16.
//! * [`poly`] is a sparse multivariate polynomial engine over exact or
//!   modular integer coefficients.
//! * [`det`] expands group determinants, either by a memoised Laplace
//!   expansion over row subsets or, for cyclic groups, as a product of
//!   character sums evaluated in cyclotomic rings.
//! * [`partitions`] counts restricted partitions by the divisor-sum formula
//!   and by brute-force enumeration.
//! * [`wolstenholme`] computes central binomial residues modulo prime powers
//!   and scans ranges of primes.
//! * [`cli`] drives the `gdet` binary: table reproduction, the polynomial
//!   cache and verification suites.

pub mod cli;
pub mod det;
pub mod error;
pub mod group;
pub mod partitions;
pub mod poly;
pub mod reference;
pub mod wolstenholme;

pub use error::{Error, Result};
