//! LT fountain codes carried over GPRS-style RLC blocks.
//!
//! Message symbols are 32-bit words. An LT encoder produces symbols that are
//! packed into 456-bit radio blocks, either raw or through one of the CS-1 to
//! CS-4 channel codes, sent over a soft-output channel model, and fed to a
//! peeling decoder. Sweeps measure fountain and total overhead against SIR.
//!
//! * [`lt`]: Robust Soliton distribution, encoder, peeling decoder
//! * [`coding`]: block checks, convolutional code, puncturing, interleaving
//! * [`channel`]: BSC, AWGN, correlated Rayleigh fading, trace replay
//! * [`pipeline`]: one link session, block by block
//! * [`experiment`]: Monte-Carlo sweeps and their CSV output
//! * [`config`], [`cli`]: run configuration and the command-line front end
//!
//! Runnable examples live in `examples/`: `robust_soliton`, `lt_roundtrip`,
//! `chain_reaction`, `fixture_tables`, `block_error_rates`, `channel_models`,
//! `rlc_session`, `total_overhead`, `overhead_sweep`, `config_file`.

pub mod channel;
pub mod cli;
pub mod coding;
pub mod config;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod lt;
pub mod pipeline;
pub mod rng;

pub use error::{Error, Result};
