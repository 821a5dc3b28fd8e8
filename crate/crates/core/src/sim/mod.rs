//! Deterministic lock-step simulation and trace property checks.

mod check;
mod engine;
mod trace;

pub use check::{check_agreement, check_lock_provenance, check_termination, check_validity, Counterexample, PropertyReport};
pub use engine::{
    consensus_processes, kset_processes, run, run_batch, run_processes, setagree_processes, Algorithm, Job, Process,
};
pub use trace::{Outcome, QueryRecord, RoundRecord, Trace, TraceParams};
