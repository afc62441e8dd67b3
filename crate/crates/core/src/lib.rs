pub mod error;
pub mod group;
pub mod harness;
pub mod homology;
pub mod pi1;
pub mod poset;
pub mod topo;

pub use error::{Error, Result};
