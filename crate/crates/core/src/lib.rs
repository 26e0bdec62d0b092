//! Classical invariants of binary forms of degree 2 through 10, GIT
//! stability over ℚ and at each prime, semistable models, and weighted
//! moduli heights in weighted projective space. All arithmetic is exact.

pub mod arith;
pub mod chain;
pub mod error;
pub mod form;
pub mod invariants;
pub mod poly;
pub mod stability;
pub mod verify;
pub mod weighted;

pub use error::{Error, Result};
