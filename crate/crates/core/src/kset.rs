//! k-uniform k-set agreement via lock histories.
//!
//! Nothing here depends on k: the number of decision values is whatever the
//! network's root structure forces.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::approx::NetworkEstimate;
use crate::decision::{Decision, RootQuery, StepOutcome, Value, Via};
use crate::dyngraph::{Pid, ProcSet};
use crate::error::{Error, Result};

/// `(members, value, creation round)`; creation round 0 marks an initial virtual lock.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lock {
    pub members: ProcSet,
    pub v: Value,
    pub tau: u32,
}

/// Sparse map `(process, round) -> locks` of who learned which lock when.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LockHistory {
    cells: BTreeMap<(Pid, u32), BTreeSet<Lock>>,
}

impl LockHistory {
    pub fn cell(&self, j: Pid, r: u32) -> Option<&BTreeSet<Lock>> {
        self.cells.get(&(j, r))
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(Pid, u32), &BTreeSet<Lock>)> {
        self.cells.iter()
    }

    pub fn insert(&mut self, j: Pid, r: u32, lock: Lock) -> bool {
        self.cells.entry((j, r)).or_default().insert(lock)
    }

    /// Locks recorded for `j` in rounds `0..=upto`.
    pub fn known_by(&self, j: Pid, upto: u32) -> BTreeSet<Lock> {
        self.cells
            .range((j, 0)..=(j, upto))
            .flat_map(|(_, locks)| locks.iter().copied())
            .collect()
    }
}

#[derive(Serialize)]
struct CellRecord<'a> {
    process: Pid,
    round: u32,
    locks: &'a BTreeSet<Lock>,
}

impl Serialize for LockHistory {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.cells.len()))?;
        for (&(process, round), locks) in &self.cells {
            seq.serialize_element(&CellRecord { process, round, locks })?;
        }
        seq.end()
    }
}

/// Next lock for root members `root`, from what they knew up to round `r_prime`, created at round `r`.
pub fn get_lock(hist: &LockHistory, root: ProcSet, r_prime: u32, r: u32) -> Result<Lock> {
    let mut counts: BTreeMap<Lock, usize> = BTreeMap::new();
    for j in root.iter() {
        for lock in hist.known_by(j, r_prime) {
            *counts.entry(lock).or_default() += 1;
        }
    }
    let top = *counts.values().max().ok_or(Error::EmptyLockSet)?;
    let most_frequent: Vec<Lock> = counts.iter().filter(|(_, &c)| c == top).map(|(l, _)| *l).collect();
    let latest: Vec<&Lock> = most_frequent
        .iter()
        .filter(|x| most_frequent.iter().all(|y| y == *x || x.tau > y.tau))
        .collect();
    let v = match latest.as_slice() {
        [only] => only.v,
        _ => counts.keys().map(|l| l.v).max().expect("nonempty"),
    };
    Ok(Lock { members: root, v, tau: r })
}

#[derive(Clone, Debug)]
pub struct KSetMessage {
    pub hist: LockHistory,
    pub decision: Option<Value>,
    pub estimate: NetworkEstimate,
}

#[derive(Clone, Debug)]
pub struct KSetState {
    id: Pid,
    hist: LockHistory,
    /// Every lock in `hist`, for the newly-learned test.
    known: BTreeSet<Lock>,
    ell: Option<i64>,
    lock: Option<Lock>,
    decision: Option<Value>,
    approx: NetworkEstimate,
    d: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KSetDigest {
    pub ell: Option<i64>,
    pub lock: Option<Lock>,
    pub decision: Option<Value>,
    pub known_locks: usize,
}

impl KSetState {
    pub fn new(id: Pid, input: Value, d: u32) -> Self {
        let virtual_lock = Lock { members: ProcSet::singleton(id), v: input, tau: 0 };
        let mut hist = LockHistory::default();
        hist.insert(id, 0, virtual_lock);
        KSetState {
            id,
            hist,
            known: BTreeSet::from([virtual_lock]),
            ell: None,
            lock: None,
            decision: None,
            approx: NetworkEstimate::new(id),
            d,
        }
    }

    pub fn id(&self) -> Pid {
        self.id
    }

    pub fn hist(&self) -> &LockHistory {
        &self.hist
    }

    pub fn ell(&self) -> Option<i64> {
        self.ell
    }

    pub fn lock(&self) -> Option<Lock> {
        self.lock
    }

    pub fn decision(&self) -> Option<Value> {
        self.decision
    }

    pub fn approx(&self) -> &NetworkEstimate {
        &self.approx
    }

    pub fn digest(&self) -> KSetDigest {
        KSetDigest { ell: self.ell, lock: self.lock, decision: self.decision, known_locks: self.known.len() }
    }

    pub fn outbound(&self) -> KSetMessage {
        KSetMessage { hist: self.hist.clone(), decision: self.decision, estimate: self.approx.clone() }
    }

    pub fn step(&mut self, inbound: &[(Pid, &KSetMessage)], r: u32) -> Result<StepOutcome> {
        let estimates: Vec<(Pid, &NetworkEstimate)> = inbound.iter().map(|(q, m)| (*q, &m.estimate)).collect();
        self.approx.step(&estimates, r)?;
        let rest: Vec<(Pid, &LockHistory, Option<Value>)> =
            inbound.iter().map(|(q, m)| (*q, &m.hist, m.decision)).collect();
        self.core_step(&rest, r)
    }

    /// Lock/decide transition for round `r`; the estimate must already include round `r`.
    pub fn core_step(&mut self, inbound: &[(Pid, &LockHistory, Option<Value>)], r: u32) -> Result<StepOutcome> {
        let mut out = StepOutcome::default();
        if self.decision.is_some() {
            return Ok(out);
        }
        if let Some(v) = inbound.iter().find_map(|(_, _, d)| *d) {
            self.decision = Some(v);
            out.decision = Some(self.event(r, v, Via::Adopted));
            return Ok(out);
        }

        let mut learned = BTreeSet::new();
        for (_, hist, _) in inbound {
            for (&(x, rr), locks) in hist.cells() {
                if x == self.id {
                    continue;
                }
                for &lock in locks {
                    if self.hist.insert(x, rr, lock) && !self.known.contains(&lock) {
                        learned.insert(lock);
                    }
                }
            }
        }
        for lock in learned {
            self.hist.insert(self.id, r, lock);
            self.known.insert(lock);
        }

        let (d, ri) = (self.d as i64, r as i64);
        let my_root = self.query(ri - 2 * d, ri - d, &mut out.queries);
        match self.ell {
            None if !my_root.is_empty() => {
                let ell = ri - 2 * d;
                let lock = get_lock(&self.hist, my_root, ell as u32, r)?;
                self.ell = Some(ell);
                self.lock = Some(lock);
                self.hist.insert(self.id, r, lock);
                self.known.insert(lock);
            }
            Some(_) if my_root.is_empty() => {
                self.ell = None;
                self.lock = None;
            }
            Some(ell) => {
                if !self.query(ell, ell + 2 * d, &mut out.queries).is_empty() {
                    let v = self.lock.expect("lock set with ell").v;
                    self.decision = Some(v);
                    out.decision = Some(self.event(r, v, Via::Own));
                }
            }
            None => {}
        }
        Ok(out)
    }

    fn query(&self, a: i64, b: i64, log: &mut Vec<RootQuery>) -> ProcSet {
        let result = self.approx.in_stable_root(a, b);
        log.push(RootQuery { a, b, result });
        result
    }

    fn event(&self, round: u32, value: Value, via: Via) -> Decision {
        Decision { process: self.id, round, value, via, lock_round: None }
    }
}
