//! (n-1)-set agreement with known n: flood the maximum, decide when isolated or at round n.

use serde::{Deserialize, Serialize};

use crate::decision::{Decision, StepOutcome, Value, Via};
use crate::dyngraph::Pid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetAgreeMessage {
    pub v: Value,
    pub y: Option<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SetAgreeState {
    id: Pid,
    v: Value,
    y: Option<Value>,
    n: u32,
    terminated: bool,
}

impl SetAgreeState {
    pub fn new(id: Pid, input: Value, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("set agreement needs n >= 2, got {n}")));
        }
        Ok(SetAgreeState { id, v: input, y: None, n, terminated: false })
    }

    pub fn id(&self) -> Pid {
        self.id
    }

    pub fn v(&self) -> Value {
        self.v
    }

    pub fn y(&self) -> Option<Value> {
        self.y
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    pub fn outbound(&self) -> SetAgreeMessage {
        SetAgreeMessage { v: self.v, y: self.y }
    }

    /// Round `r` transition; `inbound` is ordered by sender.
    pub fn step(&mut self, inbound: &[(Pid, &SetAgreeMessage)], r: u32) -> Result<StepOutcome> {
        if self.terminated {
            return Err(Error::StepAfterTermination(self.id));
        }
        if r > self.n {
            return Err(Error::InvalidParams(format!("round {r} beyond n = {}", self.n)));
        }
        let mut out = StepOutcome::default();
        for (_, m) in inbound {
            self.v = self.v.max(m.v);
        }
        if self.y.is_none() {
            if let Some(y) = inbound.iter().find_map(|(_, m)| m.y) {
                self.y = Some(y);
                out.decision = Some(self.decision(r, y, Via::Adopted));
            } else if inbound.is_empty() {
                self.y = Some(self.v);
                out.decision = Some(self.decision(r, self.v, Via::Own));
            }
        }
        if r == self.n {
            if self.y.is_none() {
                self.y = Some(self.v);
                out.decision = Some(self.decision(r, self.v, Via::Own));
            }
            self.terminated = true;
        }
        Ok(out)
    }

    fn decision(&self, round: u32, value: Value, via: Via) -> Decision {
        Decision { process: self.id, round, value, via, lock_round: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_and_outbound() {
        let s = SetAgreeState::new(Pid(1), 5, 3).unwrap();
        assert_eq!(s.outbound(), SetAgreeMessage { v: 5, y: None });
        assert!(!s.terminated());
        assert!(SetAgreeState::new(Pid(1), 5, 1).is_err());
    }

    #[test]
    fn max_rule() {
        let mut s = SetAgreeState::new(Pid(2), 4, 3).unwrap();
        s.step(&[(Pid(1), &SetAgreeMessage { v: 9, y: None })], 1).unwrap();
        assert_eq!(s.v(), 9);
        assert_eq!(s.y(), None);
    }

    #[test]
    fn isolated_decides_own() {
        let mut s = SetAgreeState::new(Pid(1), 4, 3).unwrap();
        let out = s.step(&[], 1).unwrap();
        assert_eq!(out.decision.map(|d| (d.value, d.via)), Some((4, Via::Own)));
    }

    #[test]
    fn forced_at_round_n_then_terminated() {
        let mut s = SetAgreeState::new(Pid(2), 4, 2).unwrap();
        let m = SetAgreeMessage { v: 1, y: None };
        s.step(&[(Pid(1), &m)], 1).unwrap();
        let out = s.step(&[(Pid(1), &m)], 2).unwrap();
        assert_eq!(out.decision.unwrap().value, 4);
        assert!(s.terminated());
        assert!(matches!(s.step(&[], 3), Err(Error::StepAfterTermination(_))));
    }

    #[test]
    fn adopts_first_decided_neighbour() {
        let mut s = SetAgreeState::new(Pid(3), 3, 3).unwrap();
        let a = SetAgreeMessage { v: 1, y: Some(1) };
        let b = SetAgreeMessage { v: 2, y: Some(2) };
        let out = s.step(&[(Pid(1), &a), (Pid(2), &b)], 2).unwrap();
        assert_eq!(out.decision.unwrap().value, 1);
        assert_eq!(s.v(), 3);
    }
}
