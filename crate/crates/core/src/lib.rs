//! Computable weighted variable-exponent function spaces.
//!
//! This crate evaluates modulars and Luxemburg norms of `L_w^{p(.)}`, the
//! amalgams `(L_w^{p(.)}, ℓ^q)`, the sequence spaces `ℓ_{p_n}(w)` and the
//! Sobolev spaces `W_ϑ^{k,p(.)}` on the real line, together with the
//! Hardy–Littlewood maximal operator, mollifiers and ball averages. The
//! [`compactness`] module turns the Kolmogorov–Riesz type characterizations
//! of precompact families into measured criterion curves and cross-checks
//! them with a greedy ε-net oracle.
//!
//! The crate is `no_std` and only needs `alloc`. Every operation is a pure
//! function of its inputs; results are deterministic for fixed inputs.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod amalgam;
pub mod compactness;
mod error;
pub mod function;
pub mod lebesgue;
mod math;
pub mod numerics;
pub mod operators;
pub mod sequence;
pub mod sobolev;
pub mod spaces;

pub use error::{Error, Result};
pub use function::RealFunction;
pub use numerics::{Interval, QuadratureSettings, Region};

/// Crate version, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
