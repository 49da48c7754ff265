// `!(x > 0.0)` style comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod frames;
pub mod geometry;
pub mod immersion;
pub mod io;
pub mod lawson;
pub mod lax;
pub mod reconstruct;
pub mod report;
pub mod sample;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Location, Result};
