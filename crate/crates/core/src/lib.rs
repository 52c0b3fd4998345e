//! Counting representations of quivers over finite fields.

pub mod cm;
pub mod cyclo;
pub mod endo;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod kac;
pub mod matrix;
pub mod moment;
pub mod pleth;
pub mod quiver;

pub use error::{Error, Result};
