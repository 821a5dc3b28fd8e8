use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use super::engine::Algorithm;
use crate::decision::{Decision, Value};
use crate::dyngraph::{Pid, ProcSet};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceParams {
    pub n: usize,
    pub algorithm: Algorithm,
    pub inputs: Vec<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Completed,
    /// The prefix ended before every process finished.
    PrefixExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub process: Pid,
    pub a: i64,
    pub b: i64,
    pub result: ProcSet,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u32,
    pub delivered: Vec<[u32; 2]>,
    /// Per-process state after the round, index `i` is process `i+1`.
    pub states: Vec<Json>,
    /// Per-process message sent this round.
    pub messages: Vec<Json>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub queries: Vec<QueryRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub params: TraceParams,
    pub outcome: Outcome,
    pub rounds: Vec<RoundRecord>,
    /// Sorted by `(round, process)`.
    pub decisions: Vec<Decision>,
}

impl Trace {
    pub fn new(params: TraceParams, rounds: Vec<RoundRecord>, mut decisions: Vec<Decision>, outcome: Outcome) -> Self {
        decisions.sort_by_key(|d| (d.round, d.process));
        Trace { params, outcome, rounds, decisions }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Distinct decision values in increasing order.
    pub fn decision_values(&self) -> Vec<Value> {
        let mut vs: Vec<Value> = self.decisions.iter().map(|d| d.value).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn decision_of(&self, p: Pid) -> Option<&Decision> {
        self.decisions.iter().find(|d| d.process == p)
    }

    pub fn queries(&self) -> impl Iterator<Item = (u32, &QueryRecord)> {
        self.rounds.iter().flat_map(|rr| rr.queries.iter().map(move |q| (rr.round, q)))
    }
}
