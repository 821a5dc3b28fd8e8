//! Round-labelled network approximation and stable-root detection.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dyngraph::{is_strongly_connected, CommGraph, Pid, ProcSet};
use crate::error::{Error, Result};

/// A process's underapproximation of past communication graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkEstimate {
    owner: Pid,
    round: u32,
    nodes: ProcSet,
    /// `known[t - 1][w]`: in-neighbours `v` with `v -> w` labelled `t`.
    known: Vec<Vec<ProcSet>>,
}

impl NetworkEstimate {
    pub fn new(owner: Pid) -> Self {
        NetworkEstimate { owner, round: 0, nodes: ProcSet::singleton(owner), known: Vec::new() }
    }

    pub fn owner(&self) -> Pid {
        self.owner
    }

    /// Last processed round (0 before the first step).
    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn nodes(&self) -> ProcSet {
        self.nodes
    }

    /// Applies one round: record an edge from each sender, then merge their estimates.
    pub fn step(&mut self, received: &[(Pid, &NetworkEstimate)], r: u32) -> Result<()> {
        if r <= self.round {
            return Err(Error::NonIncreasingRound { got: r, last: self.round });
        }
        let mut senders = ProcSet::EMPTY;
        for (q, _) in received {
            if senders.contains(*q) {
                return Err(Error::DuplicateSender(*q));
            }
            senders.insert(*q);
        }
        if self.known.len() < r as usize {
            self.known.resize(r as usize, Vec::new());
        }
        if !senders.is_empty() {
            let row = &mut self.known[r as usize - 1];
            let w = self.owner.index();
            if row.len() <= w {
                row.resize(w + 1, ProcSet::EMPTY);
            }
            row[w] = row[w].union(senders);
        }
        for (_, est) in received {
            self.nodes = self.nodes.union(est.nodes);
            for (t, theirs) in est.known.iter().enumerate() {
                let mine = &mut self.known[t];
                if mine.len() < theirs.len() {
                    mine.resize(theirs.len(), ProcSet::EMPTY);
                }
                for (m, o) in mine.iter_mut().zip(theirs) {
                    *m = m.union(*o);
                }
            }
        }
        self.round = r;
        Ok(())
    }

    /// Known in-neighbours of `w` in round `t`.
    pub fn in_edges_at(&self, t: u32, w: Pid) -> ProcSet {
        if t == 0 {
            return ProcSet::EMPTY;
        }
        self.known
            .get(t as usize - 1)
            .and_then(|row| row.get(w.index()))
            .copied()
            .unwrap_or(ProcSet::EMPTY)
    }

    /// Vertices of `A_p|t`: the owner plus every endpoint of an edge labelled `t`.
    pub fn vertices_at(&self, t: u32) -> ProcSet {
        let mut vs = ProcSet::singleton(self.owner);
        if t == 0 {
            return vs;
        }
        if let Some(row) = self.known.get(t as usize - 1) {
            for (i, ins) in row.iter().enumerate() {
                if !ins.is_empty() {
                    vs = vs.union(*ins);
                    vs.insert(Pid::from_index(i));
                }
            }
        }
        vs
    }

    /// Edges labelled `t`, lexicographically sorted.
    pub fn edges_at(&self, t: u32) -> Vec<(Pid, Pid)> {
        let mut out = Vec::new();
        if t == 0 {
            return out;
        }
        if let Some(row) = self.known.get(t as usize - 1) {
            for (i, ins) in row.iter().enumerate() {
                for v in ins.iter() {
                    out.push((v, Pid::from_index(i)));
                }
            }
        }
        out.sort();
        out
    }

    /// `A_p|t` as a graph over `n` processes.
    pub fn graph_estimate_at(&self, t: u32, n: usize) -> Result<CommGraph> {
        let edges: Vec<(u32, u32)> = self.edges_at(t).into_iter().map(|(v, w)| (v.0, w.0)).collect();
        CommGraph::from_edges(n, &edges)
    }

    /// `C_p|t`: the vertex set of `A_p|t` if it is strongly connected, else empty.
    pub fn stable_candidate(&self, t: u32) -> ProcSet {
        let vs = self.vertices_at(t);
        if is_strongly_connected(vs, |w| self.in_edges_at(t, w)) {
            vs
        } else {
            ProcSet::EMPTY
        }
    }

    /// Common nonempty `C_p|t` over `t` in `[a, b]`, else empty.
    /// Rounds below 1 or beyond the last processed round give an empty result.
    pub fn in_stable_root(&self, a: i64, b: i64) -> ProcSet {
        if a < 1 || a > b || b > self.round as i64 {
            return ProcSet::EMPTY;
        }
        let first = self.stable_candidate(a as u32);
        if first.is_empty() {
            return first;
        }
        for t in a + 1..=b {
            if self.stable_candidate(t as u32) != first {
                return ProcSet::EMPTY;
            }
        }
        first
    }

    /// `(v, w, rounds)` triples sorted by edge.
    pub fn labelled_edges(&self) -> Vec<(u32, u32, Vec<u32>)> {
        let mut map: std::collections::BTreeMap<(u32, u32), Vec<u32>> = std::collections::BTreeMap::new();
        for (t, row) in self.known.iter().enumerate() {
            for (i, ins) in row.iter().enumerate() {
                for v in ins.iter() {
                    map.entry((v.0, i as u32 + 1)).or_default().push(t as u32 + 1);
                }
            }
        }
        map.into_iter().map(|((v, w), ts)| (v, w, ts)).collect()
    }
}

impl Serialize for NetworkEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NetworkEstimate", 4)?;
        st.serialize_field("owner", &self.owner)?;
        st.serialize_field("round", &self.round)?;
        st.serialize_field("nodes", &self.nodes)?;
        st.serialize_field("edges", &self.labelled_edges())?;
        st.end()
    }
}
