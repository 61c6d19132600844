//! Zeros of polynomial sequences defined by the three-term recurrence
//! `P_n + B·P_{n-l} + A·P_{n-k} = 0`, together with the algebra used to
//! locate them: resultants, ordinary and q-discriminants, quotient-curve
//! geometry, curve tracing of `Im(B^k/A^l) = 0` and a verification harness.
//!
//! Data-parallel loops (batch root finding, grid evaluation, per-zero checks)
//! run on rayon when the `parallel` feature is enabled and fall back to plain
//! iterators otherwise. See [`par::Exec`].

pub mod curvetrace;
pub mod error;
pub mod examples;
pub mod geometry;
pub mod output;
pub mod par;
pub mod poly;
pub mod polyalg;
pub mod polyparse;
pub mod recurrence;
pub mod rootfind;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use poly::ComplexPoly;

/// Version string stamped into reports.
pub const TOOL_VERSION: &str = concat!("polyzeros ", env!("CARGO_PKG_VERSION"));
