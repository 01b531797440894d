//! Coxeter arrangements, their invariants and derivations, and the
//! contact-order filtration bases with exact identity checks.

#![allow(clippy::needless_range_loop)]

pub mod coxeter;
pub mod derivations;
pub mod error;
pub mod filtration;
pub mod report;
pub mod smat;

pub use error::{Error, Result};
