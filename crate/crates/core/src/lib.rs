//! Structured retrieval over XML collections.
//!
//! Documents are parsed into labeled element trees, indexed by stem with the
//! root-to-element tag path ("context") of every occurrence, and searched with
//! a small algebra whose structural operators compare query paths against
//! contexts by edit distance.

pub mod algebra;
pub mod engine;
pub mod error;
pub mod index;
pub mod ingest;
pub mod nexi;
pub mod path_sim;
