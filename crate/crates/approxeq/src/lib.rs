//! Game documents, random instances, parallel search and benchmarks on top of `approxeq-core`.

pub mod bench;
pub mod document;
pub mod error;
pub mod generate;
pub mod parallel;

pub use error::DocError;
