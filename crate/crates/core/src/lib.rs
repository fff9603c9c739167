//! Exact symbolic calculus for Lie algebroids over polynomial rings.
//!
//! Coefficients are polynomials with rational coefficients, sections are
//! expanded in a global frame, and every identity is checked as an exact
//! polynomial identity.

pub mod algebroid;
pub mod bv;
pub mod calculus;
pub mod cli;
pub mod document;
pub mod error;
pub mod exterior;
pub mod frame;
pub mod homology;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod suites;

pub use error::{Error, Result};
