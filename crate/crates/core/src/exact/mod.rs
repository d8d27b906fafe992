//! Exact integer, matrix and polynomial arithmetic used across the crate.

pub mod int;
pub mod mat;
pub mod poly;
pub mod cyc;

pub use int::{Int, Rat};
