pub mod combinatorics;
pub mod cost;
pub mod equivalence;
pub mod error;
pub mod experiments;
pub mod haar;
pub mod model;

pub use error::{NflError, Result};
