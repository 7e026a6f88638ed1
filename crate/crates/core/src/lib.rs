pub mod bundle;
pub mod clifford;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod linalg;
pub mod localization;
pub mod numerics;
pub mod scenario;

#[cfg(test)]
mod properties;

pub use error::{Error, Result};
