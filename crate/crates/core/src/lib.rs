//! Thermodynamic work and runtime limits of classical and quantum exhaustive search.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bht;
pub mod bounds;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod keylength;
pub mod logspace;
pub mod numfmt;
pub mod scenario;
pub mod units;

pub use error::{QlError, Result};
