//! A two-party laboratory for interactive quantum homomorphic encryption.
//!
//! Alice holds quantum data and performs the computation; Bob holds the circuit
//! and steers Alice through program states, then helps her undo the quantum
//! one-time pad by jointly evaluating linear polynomials over GF(2).

pub mod batch;
pub mod cli;
pub mod compiler;
pub mod error;
pub mod gadget;
pub mod identities;
pub mod keytrack;
pub mod protocol;
pub mod qcore;
pub mod subproto;
pub mod tomo;

pub use error::{Error, Result};
