//! Secret-key networks built from biased secret bits.
//!
//! - [`secret_state`]: conversions between pure classical secret correlations,
//!   one-time-pad relays and parallel-link merging.
//! - [`chain`]: the XOR relay protocol on a one-dimensional chain.
//! - [`lattice`]: honeycomb, triangular and square patches, the
//!   honeycomb-to-triangular relay transform and bond percolation estimates.
//! - [`oracle`]: exact rational enumeration of protocol runs and secrecy checks.
//! - [`cli`]: the `secperc` command-line front end.

pub mod chain;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod sampling;
pub mod secret_state;

pub use error::{Error, Result};
