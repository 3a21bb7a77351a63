//! Barycentric interpolation at Chebyshev points of the second kind, with
//! binned node storage that avoids most node-rounding error, a
//! double-double reference arithmetic, and tools to measure and bound the
//! effect of rounding.

pub mod binned;
pub mod cheb;
pub mod error;
pub mod error_model;
pub mod extprec;
pub mod harness;
pub mod real;

pub use error::{Error, Result};
pub use extprec::ExtReal;
