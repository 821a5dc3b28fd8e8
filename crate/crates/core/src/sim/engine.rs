//! Lock-step round engine.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use super::trace::{Outcome, QueryRecord, RoundRecord, Trace, TraceParams};
use crate::approx::NetworkEstimate;
use crate::consensus::{ConsensusMessage, ConsensusPayload, ConsensusState};
use crate::decision::{Decision, StepOutcome, Value};
use crate::dyngraph::{GraphSequence, Pid};
use crate::error::{Error, Result};
use crate::kset::{KSetMessage, KSetState};
use crate::par::{self, Exec};
use crate::setagree::{SetAgreeMessage, SetAgreeState};

/// Algorithm selection with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Algorithm {
    Consensus {
        #[serde(rename = "D")]
        d: u32,
        #[serde(rename = "H")]
        h: u32,
    },
    SetAgreement,
    KSet {
        #[serde(rename = "D")]
        d: u32,
    },
}

/// A simulated process: message function plus transition function.
pub trait Process {
    type Msg;
    fn outbound(&self) -> Self::Msg;
    fn step(&mut self, inbound: &[(Pid, &Self::Msg)], r: u32) -> Result<StepOutcome>;
    /// Canonical state summary recorded per round.
    fn digest(&self) -> Json;
    /// Trace summary of an outbound message.
    fn summarize(msg: &Self::Msg) -> Json;
    fn estimate(&self) -> Option<&NetworkEstimate>;
    /// No further rounds needed for this process.
    fn finished(&self) -> bool;
}

impl Process for ConsensusState {
    type Msg = ConsensusMessage;
    fn outbound(&self) -> ConsensusMessage {
        ConsensusState::outbound(self)
    }
    fn step(&mut self, inbound: &[(Pid, &ConsensusMessage)], r: u32) -> Result<StepOutcome> {
        ConsensusState::step(self, inbound, r)
    }
    fn digest(&self) -> Json {
        serde_json::to_value(ConsensusState::digest(self)).expect("plain struct")
    }
    fn summarize(msg: &ConsensusMessage) -> Json {
        match msg.payload {
            ConsensusPayload::Decide(v) => json!({ "decide": v }),
            ConsensusPayload::Propose { lock_round, x } => json!({ "lock_round": lock_round, "x": x }),
        }
    }
    fn estimate(&self) -> Option<&NetworkEstimate> {
        Some(self.approx())
    }
    fn finished(&self) -> bool {
        self.decided()
    }
}

impl Process for SetAgreeState {
    type Msg = SetAgreeMessage;
    fn outbound(&self) -> SetAgreeMessage {
        SetAgreeState::outbound(self)
    }
    fn step(&mut self, inbound: &[(Pid, &SetAgreeMessage)], r: u32) -> Result<StepOutcome> {
        SetAgreeState::step(self, inbound, r)
    }
    fn digest(&self) -> Json {
        json!({ "v": self.v(), "y": self.y(), "terminated": self.terminated() })
    }
    fn summarize(msg: &SetAgreeMessage) -> Json {
        serde_json::to_value(msg).expect("plain struct")
    }
    fn estimate(&self) -> Option<&NetworkEstimate> {
        None
    }
    fn finished(&self) -> bool {
        self.terminated()
    }
}

impl Process for KSetState {
    type Msg = KSetMessage;
    fn outbound(&self) -> KSetMessage {
        KSetState::outbound(self)
    }
    fn step(&mut self, inbound: &[(Pid, &KSetMessage)], r: u32) -> Result<StepOutcome> {
        KSetState::step(self, inbound, r)
    }
    fn digest(&self) -> Json {
        serde_json::to_value(KSetState::digest(self)).expect("plain struct")
    }
    fn summarize(msg: &KSetMessage) -> Json {
        json!({ "decision": msg.decision, "cells": msg.hist.cells().count() })
    }
    fn estimate(&self) -> Option<&NetworkEstimate> {
        Some(self.approx())
    }
    fn finished(&self) -> bool {
        self.decision().is_some()
    }
}

/// Runs `procs` (process `i+1` at index `i`) over `seq`, calling `observe` after every round.
pub fn run_processes<P: Process>(
    seq: &GraphSequence,
    procs: &mut [P],
    max_rounds: u32,
    mut observe: impl FnMut(u32, &[P]),
) -> Result<(Vec<RoundRecord>, Vec<Decision>, Outcome)> {
    if procs.len() != seq.n() {
        return Err(Error::InvalidParams(format!("{} processes for n = {}", procs.len(), seq.n())));
    }
    let mut records = Vec::new();
    let mut decisions = Vec::new();
    let mut r = 0;
    while !procs.iter().all(|p| p.finished()) {
        if r == max_rounds {
            return Ok((records, decisions, Outcome::Completed));
        }
        r += 1;
        let Some(g) = seq.graph_for(r) else {
            return Ok((records, decisions, Outcome::PrefixExhausted));
        };
        let outbox: Vec<P::Msg> = procs.iter().map(|p| p.outbound()).collect();
        let mut queries = Vec::new();
        for (i, proc_) in procs.iter_mut().enumerate() {
            let me = Pid::from_index(i);
            let inbound: Vec<(Pid, &P::Msg)> = g.in_neighbors(me).iter().map(|q| (q, &outbox[q.index()])).collect();
            let out = proc_.step(&inbound, r)?;
            queries.extend(out.queries.into_iter().map(|q| QueryRecord { process: me, a: q.a, b: q.b, result: q.result }));
            decisions.extend(out.decision);
        }
        records.push(RoundRecord {
            round: r,
            delivered: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            states: procs.iter().map(|p| p.digest()).collect(),
            messages: outbox.iter().map(P::summarize).collect(),
            queries,
        });
        observe(r, procs);
    }
    Ok((records, decisions, Outcome::Completed))
}

fn check_inputs(seq: &GraphSequence, inputs: &[Value]) -> Result<()> {
    if inputs.len() != seq.n() {
        return Err(Error::InvalidParams(format!("{} inputs for n = {}", inputs.len(), seq.n())));
    }
    Ok(())
}

pub fn consensus_processes(inputs: &[Value], d: u32, h: u32) -> Vec<ConsensusState> {
    inputs.iter().enumerate().map(|(i, &x)| ConsensusState::new(Pid::from_index(i), x, d, h)).collect()
}

pub fn kset_processes(inputs: &[Value], d: u32) -> Vec<KSetState> {
    inputs.iter().enumerate().map(|(i, &x)| KSetState::new(Pid::from_index(i), x, d)).collect()
}

pub fn setagree_processes(inputs: &[Value]) -> Result<Vec<SetAgreeState>> {
    let n = inputs.len() as u32;
    inputs.iter().enumerate().map(|(i, &x)| SetAgreeState::new(Pid::from_index(i), x, n)).collect()
}

/// Simulates `algorithm` on `seq` with one input per process.
pub fn run(seq: &GraphSequence, algorithm: Algorithm, inputs: &[Value]) -> Result<Trace> {
    check_inputs(seq, inputs)?;
    let (rounds, decisions, outcome) = match algorithm {
        Algorithm::Consensus { d, h } => {
            run_processes(seq, &mut consensus_processes(inputs, d, h), u32::MAX, |_, _| {})?
        }
        Algorithm::KSet { d } => run_processes(seq, &mut kset_processes(inputs, d), u32::MAX, |_, _| {})?,
        Algorithm::SetAgreement => {
            run_processes(seq, &mut setagree_processes(inputs)?, seq.n() as u32, |_, _| {})?
        }
    };
    Ok(Trace::new(TraceParams { n: seq.n(), algorithm, inputs: inputs.to_vec() }, rounds, decisions, outcome))
}

/// One independent simulation.
#[derive(Clone, Debug)]
pub struct Job {
    pub seq: GraphSequence,
    pub algorithm: Algorithm,
    pub inputs: Vec<Value>,
}

/// Runs independent jobs, in parallel unless `exec` says otherwise. Output order matches `jobs`.
pub fn run_batch(exec: Exec, jobs: &[Job]) -> Vec<Result<Trace>> {
    par::map_with(exec, jobs, |j| run(&j.seq, j.algorithm, &j.inputs))
}
