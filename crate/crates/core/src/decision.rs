//! Values and decision events shared by the agreement algorithms.

use serde::{Deserialize, Serialize};

use crate::dyngraph::{Pid, ProcSet};

pub type Value = i64;

/// Whether a decision came from the process's own test or was adopted from a neighbour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Via {
    Own,
    Adopted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decision {
    pub process: Pid,
    pub round: u32,
    pub value: Value,
    pub via: Via,
    /// Lock round in effect for own consensus decisions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lock_round: Option<i64>,
}

/// One stable-root query `[a, b]` issued during a step and its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootQuery {
    pub a: i64,
    pub b: i64,
    pub result: ProcSet,
}

/// What a single step produced besides the state change.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepOutcome {
    pub decision: Option<Decision>,
    pub queries: Vec<RootQuery>,
}
