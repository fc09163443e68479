//! Exact probability toolkit for absorbing-chain board games, bounded-increment
//! pile games and lattice ruin walks.
//!
//! Everything user-facing is exact: scalars are arbitrary-precision rationals,
//! probability generating functions are rational functions or roots of explicit
//! bivariate polynomials, and decimal output is produced by integer arithmetic
//! at a caller-chosen precision.

pub mod comb;
pub mod error;
pub mod rational;

pub mod intpoly;
pub mod laurent;
pub mod linalg;
pub mod markov;
pub mod montecarlo;
pub mod mpoly;
pub mod pile;
pub mod poly;
pub mod ruin;
pub mod seriesfit;
pub mod truncate;
pub mod ratfun;

pub use error::{Error, Result};
pub use mpoly::{BivarPoly, MPoly};
pub use poly::Poly;
pub use ratfun::RationalFunction;
pub use rational::Rational;
