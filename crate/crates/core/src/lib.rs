//! LP decoding for LDPC codes via check-node decomposition and ADMM.
//!
//! The library decomposes every parity check into chained degree-3
//! constraints, relaxes each to its convex hull, and solves the resulting
//! linear program with a structure-exploiting ADMM iteration whose per-
//! iteration cost grows linearly in the code length. A classic
//! sum-product decoder serves as the baseline, brute-force oracles certify
//! the fast paths at small scale, and an AWGN/BPSK Monte-Carlo harness
//! measures frame-error rates reproducibly across worker counts.
//!
//! Modules:
//! - [`code`]: parity-check matrices, the alist format, syndromes.
//! - [`polytope`]: check decomposition and the block-sparse LP data.
//! - [`admm`]: the LP decoder.
//! - [`bp`]: the sum-product baseline.
//! - [`oracles`]: dense/brute-force references for certification.
//! - [`sim`]: the Monte-Carlo channel harness.
//! - [`cli`]: the command-line front end.

// Index loops over co-indexed vectors are the house style here.
#![allow(clippy::needless_range_loop)]

pub mod admm;
pub mod bp;
pub mod cli;
pub mod code;
pub mod oracles;
pub mod polytope;
pub mod sim;

pub use admm::{decode, decode_llrs, DecodeResult, DecoderConfig, TerminationStatus};
pub use bp::{bp_decode, BpConfig};
pub use code::{parse_alist, write_alist, BitVector, ParityCheckMatrix};
pub use polytope::{build_system, ConstraintSystem};
pub use sim::{run_point, run_sweep, DecoderChoice, SimRecord, StopCondition};
