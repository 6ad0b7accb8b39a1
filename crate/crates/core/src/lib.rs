//! Exact binomial tail probabilities, the Camp-Paulson normal approximation,
//! and a numerical certificate for the lower bound
//! `P[X >= E[X]] > 1/4` whenever `X ~ B(m, p)` with `p > 1/m`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`] computes pmf, cdf and mean-threshold tails in exact rational
//!   arithmetic. Every other module treats it as ground truth.
//! * [`camp_paulson`] holds the standard normal CDF and the cube-root normal
//!   approximation to the binomial CDF together with its error envelope.
//! * [`bound_chain`] exposes each constant and intermediate bound of the
//!   argument that reduces the theorem to finitely many grid checks.
//! * [`harness`] sweeps every claim over a declared parameter range and
//!   produces deterministic, serialisable certificates.
//! * [`cli`] is the command-line front end (evaluation, sweeps, figure data).

pub mod bound_chain;
pub mod camp_paulson;
pub mod cli;
mod error;
pub mod exact;
pub mod format;
pub mod harness;
pub mod margin;

pub use error::{Error, Result};
pub use exact::{BinomialParams, ExactProbability, TailValue, TrialCount};
