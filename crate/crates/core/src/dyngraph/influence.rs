//! Influence sets between VSRCs and the majority-influence relation.

use super::causal::CausalFrontier;
use super::graph::GraphSequence;
use super::procset::ProcSet;
use super::vsrc::{vsrcs_of_length_at_least, Vsrc};
use crate::error::{Error, Result};
use crate::par;

/// Members of `suc` reached by a causal chain from `cur` that starts after `cur` ends
/// and completes before `suc` starts. Members of both sets count via self-influence.
pub fn influence_set(seq: &GraphSequence, cur: &Vsrc, suc: &Vsrc) -> Result<ProcSet> {
    if !cur.precedes(suc) {
        return Err(Error::OverlappingIntervals(cur.interval.a, cur.interval.b, suc.interval.a, suc.interval.b));
    }
    let gap = suc.interval.a - cur.interval.b - 1;
    let reached = super::causal::reach_within(seq, cur.members, cur.interval.b + 1, gap);
    Ok(suc.members.intersection(reached))
}

/// Pairwise influence sets over `V_{D+1}`, with majority influence evaluated among `V_{2D+1}`.
#[derive(Clone, Debug)]
pub struct InfluenceTable {
    d: u32,
    /// `V_{D+1}` sorted by start round.
    pub vsrcs: Vec<Vsrc>,
    /// `sets[i][j] = IS(vsrcs[i], vsrcs[j])`, empty when `i` does not precede `j`.
    sets: Vec<Vec<ProcSet>>,
}

impl InfluenceTable {
    /// Builds the table from all maximal VSRCs of `seq`.
    pub fn new(seq: &GraphSequence, all_vsrcs: &[Vsrc], d: u32) -> Self {
        let vsrcs = vsrcs_of_length_at_least(all_vsrcs, d + 1);
        let sets = par::map(&vsrcs, |cur| {
            let frontier = CausalFrontier::compute(seq, cur.members, cur.interval.b + 1);
            vsrcs
                .iter()
                .map(|suc| {
                    if !cur.precedes(suc) {
                        return ProcSet::EMPTY;
                    }
                    let gap = (suc.interval.a - cur.interval.b - 1) as usize;
                    let reached = frontier.reached.get(gap).or(frontier.reached.last()).copied().unwrap_or(cur.members);
                    suc.members.intersection(reached)
                })
                .collect()
        });
        InfluenceTable { d, vsrcs, sets }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn index_of(&self, v: &Vsrc) -> Option<usize> {
        self.vsrcs.iter().position(|x| x == v)
    }

    pub fn influence(&self, i: usize, j: usize) -> ProcSet {
        self.sets[i][j]
    }

    fn is_long(&self, i: usize) -> bool {
        self.vsrcs[i].len() >= 2 * self.d + 1
    }

    /// Majority influence of `vsrcs[cur]` on `vsrcs[suc]`; both must lie in `V_{2D+1}`.
    pub fn majority(&self, cur: usize, suc: usize) -> Result<bool> {
        for &i in &[cur, suc] {
            if !self.is_long(i) {
                return Err(Error::TooShort(self.vsrcs[i].to_string(), 2 * self.d + 1));
            }
        }
        if !self.vsrcs[cur].precedes(&self.vsrcs[suc]) {
            return Ok(false);
        }
        let own = self.sets[cur][suc].len();
        for (r, _) in self.vsrcs.iter().enumerate() {
            if r == cur {
                continue;
            }
            let theirs = self.sets[r][suc].len();
            let known = !self.sets[r][cur].is_empty();
            if known && own < theirs || !known && own <= theirs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices into `vsrcs` of `V_{2D+1}`.
    pub fn long_indices(&self) -> Vec<usize> {
        (0..self.vsrcs.len()).filter(|&i| self.is_long(i)).collect()
    }

    /// All majority-influence pairs `(cur, suc)` among `V_{2D+1}`, as indices into `vsrcs`.
    pub fn majority_relation(&self) -> Vec<(usize, usize)> {
        let long = self.long_indices();
        let rows = par::map(&long, |&i| {
            long.iter()
                .filter(|&&j| j != i && self.majority(i, j).expect("both long"))
                .map(|&j| (i, j))
                .collect::<Vec<_>>()
        });
        rows.into_iter().flatten().collect()
    }
}

/// Majority influence of `cur` on `suc` with competitors drawn from `V_{D+1}` of `seq`.
pub fn majority_influences(seq: &GraphSequence, cur: &Vsrc, suc: &Vsrc, d: u32) -> Result<bool> {
    let all = super::vsrc::enumerate_vsrcs(seq);
    let table = InfluenceTable::new(seq, &all, d);
    let find = |v: &Vsrc| {
        table
            .index_of(v)
            .filter(|&i| table.is_long(i))
            .ok_or_else(|| Error::TooShort(v.to_string(), 2 * d + 1))
    };
    let (i, j) = (find(cur)?, find(suc)?);
    table.majority(i, j)
}
