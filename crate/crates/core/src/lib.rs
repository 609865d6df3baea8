//! Exact computational toolkit for Fibonacci numeration systems, random
//! Fibonacci growth, integer-set densities and balanced words.
//!
//! Everything that touches the golden ratio or `√5` is computed in the
//! field Q(√5) with rational coordinates ([`QuadraticReal`]), so digit
//! extraction and identity checks never depend on floating-point rounding.
//!
//! The runnable programs under `examples/` walk through each capability;
//! the `fiblab` binary exposes the same operations with JSON output.

pub mod cli;
pub mod density;
pub mod error;
pub mod fibcore;
pub mod identities;
pub mod randomfib;
pub mod realbase;
pub mod words;
pub mod zeckendorf;

pub use error::{Error, Result};
pub use fibcore::{FibConvention, QuadraticReal, Rational};
