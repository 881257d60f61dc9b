//! Bidirectional SAT <-> CSP encodings together with instrumented
//! propagators (unit propagation, AC-3, GAC) and search procedures
//! (DPLL, forward checking, MAC), brute-force oracles, instance
//! generators and a claim-verification harness that compares inference
//! and search-tree sizes across encodings.

pub mod csp;
pub mod csp2sat;
pub mod encoding;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod sat;
pub mod sat2csp;

pub use error::{Error, Result};
