//! Std companion to `mapl-core`: a segment-parallel sieve, the `MAPL1` prime
//! table cache, a thread-safe class-prefix cache, the verification harness,
//! CSV/JSON output and the `mapl` command line.

pub mod cache;
pub mod cli;
pub mod error;
pub mod grid;
pub mod harness;
pub mod identities;
pub mod output;
pub mod shared;
pub mod sieve;

pub use error::{Error, Result};
pub use shared::SharedPrefixCache;
