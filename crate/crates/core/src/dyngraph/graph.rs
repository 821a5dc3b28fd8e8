//! Communication graphs, graph sequences and root components.

use serde::{Deserialize, Serialize};

use super::procset::{Pid, ProcSet, MAX_PROCESSES};
use crate::error::{Error, Result};

/// One round's directed communication graph. Self-loops are implicit and never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommGraph {
    n: usize,
    in_nbrs: Vec<ProcSet>,
    out_nbrs: Vec<ProcSet>,
}

impl CommGraph {
    pub fn empty(n: usize) -> Self {
        CommGraph {
            n,
            in_nbrs: vec![ProcSet::EMPTY; n],
            out_nbrs: vec![ProcSet::EMPTY; n],
        }
    }

    /// Builds a graph from `(from, to)` id pairs. Duplicates are merged.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if n == 0 || n > MAX_PROCESSES {
            return Err(Error::InvalidGraph(format!("n = {n} not in 1..={MAX_PROCESSES}")));
        }
        let mut g = CommGraph::empty(n);
        for &(from, to) in edges {
            if from == 0 || to == 0 || from as usize > n || to as usize > n {
                return Err(Error::InvalidGraph(format!("edge {from}->{to} references id outside 1..={n}")));
            }
            if from == to {
                return Err(Error::InvalidGraph(format!("self-loop on {from}")));
            }
            g.add_edge(Pid(from), Pid(to));
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = CommGraph::empty(n);
        for p in ProcSet::full(n).iter() {
            for q in ProcSet::full(n).iter() {
                if p != q {
                    g.add_edge(p, q);
                }
            }
        }
        g
    }

    /// Adds `from -> to`. Self-loops are ignored.
    pub fn add_edge(&mut self, from: Pid, to: Pid) {
        if from == to {
            return;
        }
        self.in_nbrs[to.index()].insert(from);
        self.out_nbrs[from.index()].insert(to);
    }

    pub fn remove_edge(&mut self, from: Pid, to: Pid) {
        self.in_nbrs[to.index()].remove(from);
        self.out_nbrs[from.index()].remove(to);
    }

    pub fn has_edge(&self, from: Pid, to: Pid) -> bool {
        from != to && self.in_nbrs[to.index()].contains(from)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> ProcSet {
        ProcSet::full(self.n)
    }

    pub fn in_neighbors(&self, p: Pid) -> ProcSet {
        self.in_nbrs[p.index()]
    }

    pub fn out_neighbors(&self, p: Pid) -> ProcSet {
        self.out_nbrs[p.index()]
    }

    pub fn in_table(&self) -> &[ProcSet] {
        &self.in_nbrs
    }

    pub fn edge_count(&self) -> usize {
        self.in_nbrs.iter().map(|s| s.len()).sum()
    }

    /// Edges in lexicographic `(from, to)` order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for p in self.vertices().iter() {
            for q in self.out_nbrs[p.index()].iter() {
                out.push((p.0, q.0));
            }
        }
        out
    }

    /// Processes reachable from `from` (inclusive).
    pub fn reachable_from(&self, from: ProcSet) -> ProcSet {
        let mut reach = from;
        let mut frontier = from;
        while !frontier.is_empty() {
            let mut next = ProcSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(self.out_nbrs[v.index()]);
            }
            frontier = next.difference(reach);
            reach = reach.union(frontier);
        }
        reach
    }

    /// Root components: strongly connected components without in-edges from outside.
    /// Sorted by smallest member.
    pub fn root_components(&self) -> Vec<ProcSet> {
        let all = self.vertices();
        let reach: Vec<ProcSet> = all.iter().map(|v| self.reachable_from(ProcSet::singleton(v))).collect();
        let mut assigned = ProcSet::EMPTY;
        let mut roots = Vec::new();
        for v in all.iter() {
            if assigned.contains(v) {
                continue;
            }
            let scc: ProcSet = reach[v.index()]
                .iter()
                .filter(|u| reach[u.index()].contains(v))
                .collect();
            assigned = assigned.union(scc);
            let closed = scc.iter().all(|u| self.in_nbrs[u.index()].is_subset(scc));
            if closed {
                roots.push(scc);
            }
        }
        roots
    }

    /// Root component containing `p`, if `p` is a root member.
    pub fn root_of(&self, p: Pid) -> Option<ProcSet> {
        self.root_components().into_iter().find(|r| r.contains(p))
    }
}

/// Strong connectivity of the subgraph on `vertices`, with `in_nbrs[w]` listing w's in-neighbours.
/// Edges leaving `vertices` are ignored. A single vertex is strongly connected.
pub fn is_strongly_connected(vertices: ProcSet, in_nbrs: impl Fn(Pid) -> ProcSet) -> bool {
    let Some(start) = vertices.first() else {
        return false;
    };
    // Backward closure from start must cover everything.
    let mut back = ProcSet::singleton(start);
    let mut frontier = back;
    while !frontier.is_empty() {
        let mut next = ProcSet::EMPTY;
        for w in frontier.iter() {
            next = next.union(in_nbrs(w).intersection(vertices));
        }
        frontier = next.difference(back);
        back = back.union(frontier);
    }
    if back != vertices {
        return false;
    }
    // Forward closure: v is reached once some in-neighbour is reached.
    let mut fwd = ProcSet::singleton(start);
    loop {
        let mut grew = false;
        for w in vertices.difference(fwd).iter() {
            if in_nbrs(w).intersects(fwd) {
                fwd.insert(w);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    fwd == vertices
}

/// How a finite prefix continues past its last round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Continuation {
    /// Nothing is known beyond the prefix.
    #[default]
    None,
    /// The last graph repeats forever.
    RepeatLast,
}

/// Generator parameters carried alongside a sequence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeqParams {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub big_d: Option<u32>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub big_h: Option<u32>,
    #[serde(rename = "r_ST", default, skip_serializing_if = "Option::is_none")]
    pub r_st: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeqMetadata {
    pub adversary: String,
    pub params: SeqParams,
}

/// A finite prefix of communication graphs over processes 1..=n.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSequence {
    n: usize,
    pub continuation: Continuation,
    rounds: Vec<CommGraph>,
    pub metadata: Option<SeqMetadata>,
}

impl GraphSequence {
    pub fn new(n: usize, rounds: Vec<CommGraph>, continuation: Continuation) -> Result<Self> {
        if n == 0 || n > MAX_PROCESSES {
            return Err(Error::InvalidGraph(format!("n = {n} not in 1..={MAX_PROCESSES}")));
        }
        if let Some((i, g)) = rounds.iter().enumerate().find(|(_, g)| g.n() != n) {
            return Err(Error::InvalidGraph(format!("round {} has n = {}, expected {n}", i + 1, g.n())));
        }
        Ok(GraphSequence { n, continuation, rounds, metadata: None })
    }

    pub fn with_metadata(mut self, meta: SeqMetadata) -> Self {
        self.metadata = Some(meta);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rounds in the prefix.
    pub fn len(&self) -> u32 {
        self.rounds.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn processes(&self) -> ProcSet {
        ProcSet::full(self.n)
    }

    pub fn rounds(&self) -> &[CommGraph] {
        &self.rounds
    }

    /// Graph of round `r` (1-based) within the prefix.
    pub fn round(&self, r: u32) -> Result<&CommGraph> {
        if r == 0 || r > self.len() {
            return Err(Error::RoundOutOfRange { round: r, len: self.len() });
        }
        Ok(&self.rounds[r as usize - 1])
    }

    /// Graph of round `r`, honouring the continuation past the prefix.
    pub fn graph_for(&self, r: u32) -> Option<&CommGraph> {
        if r == 0 {
            return None;
        }
        if r <= self.len() {
            return Some(&self.rounds[r as usize - 1]);
        }
        match self.continuation {
            Continuation::RepeatLast => self.rounds.last(),
            Continuation::None => None,
        }
    }

    /// Root components of every round of the prefix.
    pub fn roots_per_round(&self) -> Vec<Vec<ProcSet>> {
        crate::par::map(&self.rounds, |g| g.root_components())
    }

    /// Materializes continuation rounds so the prefix has at least `len` rounds where possible.
    pub fn extended(&self, len: u32) -> GraphSequence {
        let mut out = self.clone();
        if self.continuation == Continuation::RepeatLast {
            if let Some(last) = self.rounds.last() {
                while out.len() < len {
                    out.rounds.push(last.clone());
                }
            }
        }
        out
    }

    /// Truncates to the first `len` rounds.
    pub fn prefix(&self, len: u32) -> GraphSequence {
        let len = len.min(self.len()) as usize;
        GraphSequence {
            n: self.n,
            continuation: Continuation::None,
            rounds: self.rounds[..len].to_vec(),
            metadata: self.metadata.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let raw = RawSequence {
            n: self.n,
            continuation: self.continuation,
            rounds: self.rounds.iter().map(|g| g.edges().into_iter().map(|(a, b)| [a, b]).collect()).collect(),
            metadata: self.metadata.clone(),
        };
        Ok(serde_json::to_string(&raw)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawSequence = serde_json::from_str(s)?;
        let rounds = raw
            .rounds
            .iter()
            .map(|edges| {
                let pairs: Vec<(u32, u32)> = edges.iter().map(|e| (e[0], e[1])).collect();
                CommGraph::from_edges(raw.n, &pairs)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut seq = GraphSequence::new(raw.n, rounds, raw.continuation)?;
        seq.metadata = raw.metadata;
        Ok(seq)
    }
}

#[derive(Serialize, Deserialize)]
struct RawSequence {
    n: usize,
    #[serde(default)]
    continuation: Continuation,
    rounds: Vec<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<SeqMetadata>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyngraph::procs;

    #[test]
    fn rejects_bad_edges() {
        assert!(CommGraph::from_edges(3, &[(1, 1)]).is_err());
        assert!(CommGraph::from_edges(3, &[(1, 4)]).is_err());
        assert!(CommGraph::from_edges(3, &[(0, 2)]).is_err());
    }

    #[test]
    fn roots_of_small_graphs() {
        let g = CommGraph::from_edges(5, &[(1, 2), (2, 1), (4, 1), (4, 5), (2, 3), (5, 2)]).unwrap();
        assert_eq!(g.root_components(), vec![procs(&[4])]);
        assert_eq!(CommGraph::complete(3).root_components(), vec![procs(&[1, 2, 3])]);
        assert_eq!(
            CommGraph::empty(3).root_components(),
            vec![procs(&[1]), procs(&[2]), procs(&[3])]
        );
    }

    #[test]
    fn strong_connectivity_helper() {
        let g = CommGraph::from_edges(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        assert!(is_strongly_connected(procs(&[1, 2, 3]), |w| g.in_neighbors(w)));
        assert!(!is_strongly_connected(procs(&[1, 2]), |w| g.in_neighbors(w)));
        assert!(is_strongly_connected(procs(&[2]), |w| g.in_neighbors(w)));
        assert!(!is_strongly_connected(ProcSet::EMPTY, |w| g.in_neighbors(w)));
    }

    #[test]
    fn json_is_sorted_and_roundtrips() {
        let g = CommGraph::from_edges(3, &[(3, 1), (1, 3), (1, 2)]).unwrap();
        let seq = GraphSequence::new(3, vec![g], Continuation::RepeatLast).unwrap();
        let j = seq.to_json().unwrap();
        assert_eq!(j, r#"{"n":3,"continuation":"repeat_last","rounds":[[[1,2],[1,3],[3,1]]]}"#);
        assert_eq!(GraphSequence::from_json(&j).unwrap(), seq);
    }

    #[test]
    fn continuation_lookup() {
        let g = CommGraph::from_edges(2, &[(1, 2)]).unwrap();
        let mut seq = GraphSequence::new(2, vec![g], Continuation::None).unwrap();
        assert!(seq.graph_for(2).is_none());
        seq.continuation = Continuation::RepeatLast;
        assert!(seq.graph_for(7).unwrap().has_edge(Pid(1), Pid(2)));
        assert!(seq.round(0).is_err());
    }
}
