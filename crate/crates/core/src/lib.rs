//! Qubit POVM toolkit for path-marking Mach-Zehnder interferometry.

pub mod cli;
pub mod complementarity;
pub mod error;
pub mod extraction;
pub mod interferometer;
pub mod oracle;
pub mod povm;
pub mod qubit;
pub mod relations;
pub mod suite;

pub use error::{Error, Result};
