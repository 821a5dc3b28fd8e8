//! Consensus by locking on a detected stable root and deciding after confirmed spread.

use serde::{Deserialize, Serialize};

use crate::approx::NetworkEstimate;
use crate::decision::{Decision, RootQuery, StepOutcome, Value, Via};
use crate::dyngraph::Pid;
use crate::error::Result;

/// Consensus payload, without the piggybacked estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsensusPayload {
    Decide(Value),
    Propose { lock_round: i64, x: Value },
}

#[derive(Clone, Debug)]
pub struct ConsensusMessage {
    pub payload: ConsensusPayload,
    pub estimate: NetworkEstimate,
}

#[derive(Clone, Debug)]
pub struct ConsensusState {
    id: Pid,
    x: Value,
    locked: bool,
    lock_round: i64,
    decided: bool,
    approx: NetworkEstimate,
    d: u32,
    h: u32,
}

/// Compact state summary for traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConsensusDigest {
    pub x: Value,
    pub locked: bool,
    pub lock_round: i64,
    pub decided: bool,
}

impl ConsensusState {
    pub fn new(id: Pid, input: Value, d: u32, h: u32) -> Self {
        ConsensusState {
            id,
            x: input,
            locked: false,
            lock_round: 0,
            decided: false,
            approx: NetworkEstimate::new(id),
            d,
            h,
        }
    }

    pub fn id(&self) -> Pid {
        self.id
    }

    pub fn x(&self) -> Value {
        self.x
    }

    pub fn locked(&self) -> bool {
        self.locked
    }

    pub fn lock_round(&self) -> i64 {
        self.lock_round
    }

    pub fn decided(&self) -> bool {
        self.decided
    }

    pub fn approx(&self) -> &NetworkEstimate {
        &self.approx
    }

    pub fn digest(&self) -> ConsensusDigest {
        ConsensusDigest { x: self.x, locked: self.locked, lock_round: self.lock_round, decided: self.decided }
    }

    pub fn payload(&self) -> ConsensusPayload {
        if self.decided {
            ConsensusPayload::Decide(self.x)
        } else {
            ConsensusPayload::Propose { lock_round: self.lock_round, x: self.x }
        }
    }

    pub fn outbound(&self) -> ConsensusMessage {
        ConsensusMessage { payload: self.payload(), estimate: self.approx.clone() }
    }

    /// Full round: estimate update first, then the consensus transition.
    pub fn step(&mut self, inbound: &[(Pid, &ConsensusMessage)], r: u32) -> Result<StepOutcome> {
        let estimates: Vec<(Pid, &NetworkEstimate)> = inbound.iter().map(|(q, m)| (*q, &m.estimate)).collect();
        self.approx.step(&estimates, r)?;
        let payloads: Vec<(Pid, ConsensusPayload)> = inbound.iter().map(|(q, m)| (*q, m.payload)).collect();
        Ok(self.core_step(&payloads, r))
    }

    /// Consensus transition for round `r`; the estimate must already include round `r`.
    pub fn core_step(&mut self, inbound: &[(Pid, ConsensusPayload)], r: u32) -> StepOutcome {
        let mut out = StepOutcome::default();
        if self.decided {
            return out;
        }
        let adopted = inbound
            .iter()
            .filter_map(|(q, p)| match p {
                ConsensusPayload::Decide(v) => Some((*q, *v)),
                _ => None,
            })
            .min_by_key(|(q, _)| *q);
        if let Some((_, v)) = adopted {
            self.x = v;
            self.decided = true;
            out.decision = Some(self.decision(r, Via::Adopted, None));
            return out;
        }
        let mut best = (self.lock_round, self.x);
        for (_, p) in inbound {
            if let ConsensusPayload::Propose { lock_round, x } = *p {
                best = best.max((lock_round, x));
            }
        }
        (self.lock_round, self.x) = best;

        let (d, h, r) = (self.d as i64, self.h as i64, r as i64);
        let stable = self.query(r - d - 1, r - d, &mut out.queries);
        if stable {
            if !self.locked {
                self.locked = true;
                self.lock_round = r;
            } else if self.query(self.lock_round, self.lock_round + h, &mut out.queries) {
                self.decided = true;
                out.decision = Some(self.decision(r as u32, Via::Own, Some(self.lock_round)));
            }
        } else {
            self.locked = false;
        }
        out
    }

    fn query(&self, a: i64, b: i64, log: &mut Vec<RootQuery>) -> bool {
        let result = self.approx.in_stable_root(a, b);
        log.push(RootQuery { a, b, result });
        !result.is_empty()
    }

    fn decision(&self, round: u32, via: Via, lock_round: Option<i64>) -> Decision {
        Decision { process: self.id, round, value: self.x, via, lock_round }
    }
}
