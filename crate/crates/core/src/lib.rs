pub mod error;
pub mod exact;
pub mod galois;
pub mod geometry;
pub mod intersection;
pub mod localfields;
pub mod brauer;
pub mod search;
pub mod report;

pub use error::{Error, Result};
