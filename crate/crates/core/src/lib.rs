pub mod affine;
pub mod catalog;
pub mod error;
pub mod expm;
pub mod expr;
pub mod frames;
pub mod invariants;
pub mod jet;
pub mod reconstruct;
pub mod verify;

pub use error::{Error, Result};
