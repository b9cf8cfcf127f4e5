//! Numerical verification of improved discrete Hardy and Copson inequalities.

pub mod cli;
pub mod copson;
pub mod error;
pub mod gamma;
pub mod inequality;
pub mod io;
pub mod optimality;
pub mod reference;
pub mod seq;
pub mod sum;
pub mod weights;

pub use error::{Error, Result};
pub use seq::{Bracket, FiniteSequence, PartialSums, WeightSeq};
