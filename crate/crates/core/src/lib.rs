//! Certified elementary diagonalization over finite exchange rings.

pub mod cli;
pub mod diagonalize;
pub mod exchange;
pub mod format;
pub mod matrix;
pub mod oracle;
pub mod ring;
mod zmod;

pub use ring::{Element, FullnessWitness, Ring, RingError, RingId, RingSpec};
