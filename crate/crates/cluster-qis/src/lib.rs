//! Simulation and verification of a k-party quantum-information-splitting
//! protocol over N-qubit linear cluster channels.
//!
//! The crate is organized in four layers:
//!
//! * [`sim`] — a dense statevector engine: labeled-qubit gate application,
//!   exhaustive projective-measurement branch enumeration, partial trace,
//!   and state-comparison metrics.
//! * [`channel`] — construction of the linear cluster channel in its product,
//!   circuit, and reference (explicit-ket) forms, plus the pre-distribution
//!   swap schedules.
//! * [`protocol`] — the protocol actors: qubit distribution, the dealer's
//!   locking measurement, the intermediaries' unlocking measurements,
//!   classical transcripts, and the receiver's closed-form corrections.
//! * [`synth`] — ground-truth machinery: per-branch transfer maps, brute-force
//!   synthesis of correction tables over Clifford dictionaries, audits of the
//!   closed-form decoders, variant sweeps, and security scans.

pub mod channel;
pub mod error;
pub mod linalg;
pub mod protocol;
pub mod report;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};
