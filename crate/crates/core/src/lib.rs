//! Quasi-twisted codes over small finite fields: construction from
//! constacyclic building blocks, exact minimum distance, equivalence
//! classification of constacyclic codes and a reproducible search driver.

pub mod algebra;
pub mod codec;
pub mod constacyclic;
pub mod distance;
pub mod equivalence;
pub mod error;
pub mod linearcode;
pub mod qt;
pub mod search;
pub mod tables;

pub use error::{Error, Result};
