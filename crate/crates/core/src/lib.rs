//! Exact-arithmetic pipeline for effective irrationality measures of cube
//! roots: hypergeometric approximants, their denominator arithmetic, the
//! supporting prime-count sieve, cubic continued fractions, and the final
//! measure constants. Everything that feeds a verdict is integer, rational,
//! or directed-rounding interval arithmetic; floats appear only in reports.

pub mod cf;
pub mod denoms;
pub mod error;
pub mod fixedlog;
pub mod hypergeom;
pub mod interval;
pub mod measures;
pub mod primes;
pub mod sieve;
pub mod valuation;

pub use error::{Error, Result};
pub use fixedlog::{fixed_log, FixedLog};
pub use interval::{decide, Dyadic, RealInterval};
