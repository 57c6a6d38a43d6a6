//! Tools for checking which trinomials `x + a x^(q(q-1)+1) + b x^(2(q-1)+1)`
//! permute GF(q^2), q = 2^m.

pub mod classifier;
pub mod cli;
pub mod curve;
pub mod error;
pub mod fields;
pub mod symbolic;
pub mod trinomial;

pub use error::{Error, Result};
