//! Effective bounds for the differential Nullstellensatz.

pub mod bounds;
pub mod dickson;
pub mod diff;
mod error;
pub mod nullstellensatz;
pub mod poly;
pub mod problem;
pub mod rgbound;
pub mod reduction;

pub use error::{Error, Result};
