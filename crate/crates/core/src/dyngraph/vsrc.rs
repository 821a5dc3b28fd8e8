//! Vertex-stable root components.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::graph::GraphSequence;
use super::procset::ProcSet;
use crate::error::{Error, Result};

/// Closed round interval `[a, b]`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub a: u32,
    pub b: u32,
}

impl Interval {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a == 0 || a > b {
            return Err(Error::InvalidParams(format!("interval [{a},{b}] needs 1 <= a <= b")));
        }
        Ok(Interval { a, b })
    }

    pub fn len(&self) -> u32 {
        self.b - self.a + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, r: u32) -> bool {
        self.a <= r && r <= self.b
    }

    pub fn covers(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

/// Root member set together with a round interval over which it is a root every round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vsrc {
    pub members: ProcSet,
    pub interval: Interval,
}

impl Vsrc {
    pub fn len(&self) -> u32 {
        self.interval.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Strictly earlier: ends before `other` starts.
    pub fn precedes(&self, other: &Vsrc) -> bool {
        self.interval.b < other.interval.a
    }
}

impl fmt::Display for Vsrc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.members, self.interval)
    }
}

/// All maximal VSRCs of the prefix, sorted by start round then members.
pub fn enumerate_vsrcs(seq: &GraphSequence) -> Vec<Vsrc> {
    vsrcs_from_roots(&seq.roots_per_round())
}

/// Same as [`enumerate_vsrcs`] from precomputed per-round roots (index 0 is round 1).
pub fn vsrcs_from_roots(roots: &[Vec<ProcSet>]) -> Vec<Vsrc> {
    let mut out = Vec::new();
    let mut active: BTreeMap<ProcSet, u32> = BTreeMap::new();
    for (i, round_roots) in roots.iter().enumerate() {
        let r = i as u32 + 1;
        let mut next = BTreeMap::new();
        for &members in round_roots {
            let start = active.get(&members).copied().unwrap_or(r);
            next.insert(members, start);
        }
        for (&members, &a) in &active {
            if !next.contains_key(&members) {
                out.push(Vsrc { members, interval: Interval { a, b: r - 1 } });
            }
        }
        active = next;
    }
    let last = roots.len() as u32;
    for (members, a) in active {
        out.push(Vsrc { members, interval: Interval { a, b: last } });
    }
    out.sort_by_key(|v| (v.interval.a, v.members));
    out
}

/// `V_d`: VSRCs whose interval has at least `d` rounds.
pub fn vsrcs_of_length_at_least(vsrcs: &[Vsrc], d: u32) -> Vec<Vsrc> {
    vsrcs.iter().copied().filter(|v| v.len() >= d).collect()
}

/// Root sets that are roots in every round of `window`.
pub fn roots_spanning(vsrcs: &[Vsrc], window: Interval) -> Vec<Vsrc> {
    vsrcs.iter().filter(|v| v.interval.covers(&window)).copied().collect()
}
