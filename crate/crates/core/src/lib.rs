//! Locally decodable source coding for Bernoulli sources.
//!
//! Compressed containers produced here answer single-symbol queries by
//! reading a bounded number of payload bits, and every such read goes
//! through a [`container::QueryLedger`] so the bound is measured rather
//! than assumed.
//!
//! - [`f2`]: dense GF(2) linear algebra and subspace probabilities.
//! - [`stats`]: entropy, divergence, error exponents and rate bounds.
//! - [`enumerative`]: the per-block code over the most probable sequences.
//! - [`lossless`]: block-concatenated almost-lossless compressor and planner.
//! - [`lossy`]: covering codebooks and the lossy compressor.
//! - [`container`]: the byte format and the query ledger.
//! - [`converse`]: exhaustive and randomized checks of the impossibility results.
//! - [`cli`]: the `ldsc` command-line front end.

pub mod cli;
pub mod container;
pub mod converse;
pub mod enumerative;
pub mod error;
pub mod f2;
pub mod lossless;
pub mod lossy;
pub mod stats;

pub use container::{CompressedContainer, QueryLedger};
pub use enumerative::TopSetCode;
pub use error::{Error, Result};
pub use f2::{BitMatrix, BitVector, SubspaceBasis};
pub use lossless::LosslessPlan;
pub use lossy::{LossyCodebook, LossyPlan};
pub use stats::SourceModel;
