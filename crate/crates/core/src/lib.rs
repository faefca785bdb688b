//! Exact combinatorics for two-faced noncommutative distributions: bi-Boolean,
//! bi-free, bi-Fermi, free and Boolean cumulants, independence products,
//! additive and twisted multiplicative convolutions, transform series, and
//! positivity probes. All arithmetic is over exact rationals.

pub mod convolutions;
pub mod cumulants;
pub mod error;
pub mod io;
pub mod model;
pub mod partitions;
pub mod positivity;
pub mod products;
pub mod random;
pub mod rational;
pub mod series;
pub mod transforms;

pub use error::{Error, Result};
pub use rational::Rational;
