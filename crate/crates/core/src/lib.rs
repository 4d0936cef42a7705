//! Simulation and numerical verification of multistable Lévy motions.
//!
//! The crate samples the independent-increments multistable Lévy motion
//! through weighted sums of independent stable variables, builds continuous
//! approximations from triangle-basis stable processes, evaluates
//! multistable integrals, and checks every distributional statement by
//! comparing empirical characteristic functions with closed forms.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpha;
pub mod cli;
pub mod continuous;
pub mod integrals;
mod error;
pub mod path;
pub mod quad;
pub mod report;
pub mod rng;
pub mod schemes;
pub mod stable;
pub mod suite;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use rng::RandomStream;
