//! Exact computation in the Nottingham group over rings of characteristic
//! `p`, and machinery for checking depth bounds for `g^p f^{-p}`.

pub mod coeffring;
pub mod error;

pub use error::{Error, Result};
pub mod nottingham;
pub mod bounds;
pub mod generic;
pub mod matrixcalc;
pub mod identities;
pub mod suites;
