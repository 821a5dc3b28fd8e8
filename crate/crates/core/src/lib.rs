//! Directed dynamic networks under message adversaries.
//!
//! Round-based graph sequences, vertex-stable root components, adversary generators and
//! validators, and the network-approximation, consensus, set-agreement and k-set agreement
//! algorithms together with a deterministic lock-step simulator.

pub mod adversary;
pub mod approx;
pub mod consensus;
pub mod decision;
pub mod dyngraph;
pub mod error;
pub mod kset;
pub mod par;
pub mod setagree;
pub mod sim;

pub use error::{Error, Result};
