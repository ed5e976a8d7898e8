//! Classification toolkit for design patterns in EHR phenotype-algorithm
//! narratives.
//!
//! The pipeline goes: ingest an annotated fragment corpus ([`corpus`]), turn
//! fragments into numeric features ([`features`], optionally backed by word
//! vectors from [`embeddings`]), train one-vs-all linear SVMs ([`svm`]) or
//! per-pattern convolutional classifiers ([`cnn`]), score them ([`eval`]),
//! and export pattern/phenotype/site co-occurrence networks ([`graph`]).
//!
//! Every operation that consumes randomness takes an explicit seed and is
//! reproducible bit-for-bit across runs.

pub mod cnn;
pub mod corpus;
pub mod embeddings;
pub mod eval;
pub mod features;
pub mod graph;
pub mod svm;

mod error;
mod seed;

pub use error::Error;
pub use seed::derive_seed;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
