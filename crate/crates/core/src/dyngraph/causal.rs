//! Causal influence: forward frontiers, causal distances and diameters.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::graph::{CommGraph, Continuation, GraphSequence};
use super::procset::{Pid, ProcSet};
use super::vsrc::Vsrc;
use crate::error::{Error, Result};
use crate::par;

/// Length of a shortest causal chain, or why none was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CausalDistance {
    Finite(u32),
    /// Not reached within the prefix and nothing is known about later rounds.
    Unknown,
    /// Provably never reached (static continuation saturated).
    Infinite,
}

impl CausalDistance {
    pub fn finite(self) -> Option<u32> {
        match self {
            CausalDistance::Finite(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_at_most(self, bound: u32) -> bool {
        matches!(self, CausalDistance::Finite(k) if k <= bound)
    }

    fn rank(self) -> (u8, u32) {
        match self {
            CausalDistance::Finite(k) => (0, k),
            CausalDistance::Unknown => (1, 0),
            CausalDistance::Infinite => (2, 0),
        }
    }
}

impl PartialOrd for CausalDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite distances order numerically; `Unknown` sorts above every finite value and below `Infinite`.
impl Ord for CausalDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for CausalDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CausalDistance::Finite(k) => write!(f, "{k}"),
            CausalDistance::Unknown => write!(f, "unknown"),
            CausalDistance::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for CausalDistance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CausalDistance::Finite(k) => s.serialize_u32(*k),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// One round of influence: everything already reached plus its out-neighbours.
pub fn spread(g: &CommGraph, reached: ProcSet) -> ProcSet {
    let mut next = reached;
    for v in reached.iter() {
        next = next.union(g.out_neighbors(v));
    }
    next
}

/// Forward frontier from `origin` starting at round `start`.
/// `reached[k]` is the set reached after rounds `start..start+k-1`.
#[derive(Clone, Debug)]
pub struct CausalFrontier {
    pub origin: ProcSet,
    pub start_round: u32,
    pub reached: Vec<ProcSet>,
    /// True when later rounds provably add nothing.
    pub saturated: bool,
}

impl CausalFrontier {
    /// Propagates through the prefix and, under a static continuation, until a fixpoint.
    pub fn compute(seq: &GraphSequence, origin: ProcSet, start_round: u32) -> Self {
        let mut reached = vec![origin];
        let mut cur = origin;
        let mut r = start_round;
        while r <= seq.len() {
            cur = spread(seq.graph_for(r).expect("round in prefix"), cur);
            reached.push(cur);
            r += 1;
        }
        let mut saturated = cur == seq.processes();
        if !saturated && seq.continuation == Continuation::RepeatLast {
            if let Some(last) = seq.rounds().last() {
                loop {
                    let next = spread(last, cur);
                    if next == cur {
                        break;
                    }
                    cur = next;
                    reached.push(cur);
                }
                saturated = true;
            }
        }
        CausalFrontier { origin, start_round, reached, saturated }
    }

    /// Minimum causal distance from the origin set to `q`.
    pub fn distance_to(&self, q: Pid) -> CausalDistance {
        if self.origin.contains(q) {
            return CausalDistance::Finite(1);
        }
        match self.reached.iter().position(|s| s.contains(q)) {
            Some(k) => CausalDistance::Finite(k as u32),
            None if self.saturated => CausalDistance::Infinite,
            None => CausalDistance::Unknown,
        }
    }

    /// Round at the end of which `q` is first reached (origin members count as `start_round - 1`).
    pub fn first_round(&self, q: Pid) -> Option<u32> {
        self.reached.iter().position(|s| s.contains(q)).map(|k| self.start_round + k as u32 - 1)
    }
}

/// Set reached from `origin` after `steps` rounds starting at `start`.
/// Rounds missing from the prefix (without continuation) contribute no edges.
pub fn reach_within(seq: &GraphSequence, origin: ProcSet, start: u32, steps: u32) -> ProcSet {
    let mut cur = origin;
    for r in start..start + steps {
        match seq.graph_for(r) {
            Some(g) => cur = spread(g, cur),
            None => break,
        }
        if cur == seq.processes() {
            break;
        }
    }
    cur
}

/// `cd^r(p, q)`.
pub fn causal_distance(seq: &GraphSequence, p: Pid, q: Pid, r: u32) -> Result<CausalDistance> {
    check_round(seq, r)?;
    check_pid(seq, p)?;
    check_pid(seq, q)?;
    if p == q {
        return Ok(CausalDistance::Finite(1));
    }
    Ok(CausalFrontier::compute(seq, ProcSet::singleton(p), r).distance_to(q))
}

/// Maximum causal distance between members of `vsrc` starting at round `x`.
pub fn dynamic_causal_diameter(seq: &GraphSequence, vsrc: &Vsrc, x: u32) -> Result<CausalDistance> {
    check_in_interval(vsrc, x)?;
    check_round(seq, x)?;
    let mut worst = CausalDistance::Finite(1);
    for p in vsrc.members.iter() {
        let f = CausalFrontier::compute(seq, ProcSet::singleton(p), x);
        for q in vsrc.members.iter() {
            worst = worst.max(f.distance_to(q));
        }
    }
    Ok(worst)
}

/// `h^x`: rounds until the union of `roots` has reached every process, starting at `x`.
pub fn network_causal_diameter(seq: &GraphSequence, roots: ProcSet, x: u32) -> Result<CausalDistance> {
    check_round(seq, x)?;
    let f = CausalFrontier::compute(seq, roots, x);
    Ok(seq.processes().iter().map(|q| f.distance_to(q)).max().unwrap_or(CausalDistance::Finite(1)))
}

/// `|I| < D`, or every `x` in `[a, b-D+1]` has diameter at most `D`.
pub fn is_d_bounded(seq: &GraphSequence, vsrc: &Vsrc, d: u32) -> bool {
    let iv = vsrc.interval;
    if iv.len() < d {
        return true;
    }
    if d == 0 {
        return false;
    }
    let xs: Vec<u32> = (iv.a..=iv.b + 1 - d).collect();
    par::all(&xs, |&x| {
        vsrc.members
            .iter()
            .all(|p| vsrc.members.is_subset(reach_within(seq, ProcSet::singleton(p), x, d)))
    })
}

/// `|I| < H`, or from every `x` in `[a, b-H+1]` the union of `roots` reaches all processes within `H` rounds.
pub fn is_h_network_bounded(seq: &GraphSequence, roots: &[Vsrc], h: u32) -> Result<bool> {
    let Some(first) = roots.first() else {
        return Err(Error::InvalidParams("empty root component set".into()));
    };
    let iv = first.interval;
    if roots.iter().any(|v| v.interval != iv) {
        return Err(Error::MismatchedIntervals);
    }
    if iv.len() < h {
        return Ok(true);
    }
    let union = roots.iter().fold(ProcSet::EMPTY, |acc, v| acc.union(v.members));
    let all = seq.processes();
    if h == 0 {
        return Ok(union == all);
    }
    let xs: Vec<u32> = (iv.a..=iv.b + 1 - h).collect();
    Ok(par::all(&xs, |&x| reach_within(seq, union, x, h) == all))
}

fn check_round(seq: &GraphSequence, r: u32) -> Result<()> {
    if r == 0 || r > seq.len() {
        return Err(Error::RoundOutOfRange { round: r, len: seq.len() });
    }
    Ok(())
}

fn check_pid(seq: &GraphSequence, p: Pid) -> Result<()> {
    if p.0 == 0 || p.0 as usize > seq.n() {
        return Err(Error::InvalidParams(format!("process {p} not in 1..={}", seq.n())));
    }
    Ok(())
}

fn check_in_interval(vsrc: &Vsrc, x: u32) -> Result<()> {
    if !vsrc.interval.contains(x) {
        return Err(Error::OutsideInterval { round: x, a: vsrc.interval.a, b: vsrc.interval.b });
    }
    Ok(())
}
