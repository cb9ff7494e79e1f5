//! A simulation and verification toolkit for a binary mixed-regime language
//! process.
//!
//! The process interleaves two latent regimes: a deterministic one whose
//! tokens strictly alternate, and a fair coin. An ideal text-only predictor
//! can only track a posterior over the hidden regime, so its confidence can
//! be structurally misplaced: after a long alternating stretch it predicts
//! sharply even when the governing regime is the coin. This crate computes
//! everything about that situation exactly and then confirms the closed forms
//! by seeded Monte Carlo:
//!
//! - [`process`] — the generative model and deterministic trajectory sampling
//! - [`filter`] — the exact regime posterior, with a path-enumeration oracle
//! - [`predictor`] — marginal, temperature-scaled, and grounding-augmented
//!   predictive distributions, and the dominance threshold for corrective
//!   signals
//! - [`infotheory`] — binary entropy, the sufficiency gap, and residual
//!   mutual information after grounding
//! - [`decision`] — expected loss, Bayes actions, and the regret of acting on
//!   text-only information
//! - [`montecarlo`] — the reproducible experiment harness with CSV/JSON-lines
//!   export
//!
//! All probability-valued arguments are validated, never clamped; all
//! entropies are in bits. Every sampler and experiment is a pure function of
//! its configuration and seed.

#![forbid(unsafe_code)]

pub mod decision;
pub mod error;
pub mod filter;
pub mod infotheory;
pub mod montecarlo;
pub mod predictor;
pub mod process;

pub use error::{Error, Result};
pub use process::ModelParams;
