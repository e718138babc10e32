//! Exact loop-algebra expansions: structure constants, splittings, expanded
//! and contracted algebras, and the Maurer–Cartan forms of the loop group.

pub mod algebra;
pub mod cli;
pub mod contraction;
pub mod error;
pub mod expansion;
pub mod export;
pub mod jacobi;
pub mod loop_algebra;
pub mod mc_forms;
pub mod rational;
pub mod splitting;

pub use error::{Error, Result};
