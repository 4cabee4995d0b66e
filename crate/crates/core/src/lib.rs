//! Analysis of requirements that stem from several jurisdictions.
//!
//! The crate partitions sources and requirements into general and specific
//! sets per hierarchy level, derives refinement and contradiction relations,
//! removes redundant requirements, classifies changes by their impact on the
//! partitions and ranks candidate conflict resolutions with TOPSIS.

pub mod change;
pub mod corpus_io;
pub mod error;
pub mod finding;
pub mod hierarchy;
pub mod model;
pub mod optimizer;
pub mod partition;
pub mod relations;
pub mod topsis;
pub mod validate;

#[cfg(feature = "testkit")]
pub mod testkit;

pub use error::{Error, Result};
pub use model::*;
