//! Exact arithmetic for involutive Heegaard Floer correction terms of
//! iota-complexes, lens spaces, torus knots and their cables.

pub mod algebra;
pub mod concordance;
pub mod error;
pub mod iota;
pub mod lens;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
