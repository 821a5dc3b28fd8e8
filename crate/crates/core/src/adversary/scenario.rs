//! Fixed adversarial constructions used by the impossibility arguments, as graph sequences.

use serde::{Deserialize, Serialize};

use crate::dyngraph::{CommGraph, Continuation, GraphSequence, Pid, SeqMetadata, SeqParams};
use crate::error::{Error, Result};

pub const SCENARIOS: &[&str] =
    &["static_star", "line_reversal", "ring_split", "lossy_link", "singleton_partitions", "phase_decider"];

/// Parameters for [`scenario`]; unset fields take per-scenario defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Total prefix length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u32>,
    /// Last round of the forward line in `line_reversal`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<u32>,
    /// Switch round: ring length in `ring_split`, first silent round in `lossy_link`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_st: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u32>,
    /// Link directions per round, cycled: `f` = 1->2, `b` = 2->1, `x` = both.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_len: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<u32>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn edge(g: &mut CommGraph, u: u32, v: u32) {
    g.add_edge(Pid(u), Pid(v));
}

fn line(g: &mut CommGraph, ids: &[u32]) {
    for w in ids.windows(2) {
        edge(g, w[0], w[1]);
    }
}

/// Builds the named construction. Output depends only on `name` and `params`.
pub fn scenario(name: &str, params: &ScenarioParams) -> Result<GraphSequence> {
    let (n, rounds) = match name {
        "static_star" => static_star(params)?,
        "line_reversal" => line_reversal(params)?,
        "ring_split" => ring_split(params)?,
        "lossy_link" => lossy_link(params)?,
        "singleton_partitions" => singleton_partitions(params)?,
        "phase_decider" => phase_decider(params)?,
        _ => return Err(Error::UnknownScenario(name.to_string())),
    };
    let seq = GraphSequence::new(n, rounds, Continuation::RepeatLast)?;
    Ok(seq.with_metadata(SeqMetadata {
        adversary: format!("scenario/{name}"),
        params: SeqParams { n, k: params.k, r_st: params.r_st, big_h: params.h, ..Default::default() },
    }))
}

fn static_star(p: &ScenarioParams) -> Result<(usize, Vec<CommGraph>)> {
    let n = p.n.unwrap_or(5);
    let rounds = p.rounds.unwrap_or(10);
    let c = p.center.unwrap_or(1);
    if n < 1 || c < 1 || c as usize > n {
        return Err(bad(format!("center {c} not in 1..={n}")));
    }
    let mut g = CommGraph::empty(n);
    for q in 1..=n as u32 {
        if q != c {
            edge(&mut g, c, q);
        }
    }
    Ok((n, vec![g; rounds as usize]))
}

/// Line `1 -> .. -> n` through round `kappa`, the reversed line afterwards.
fn line_reversal(p: &ScenarioParams) -> Result<(usize, Vec<CommGraph>)> {
    let n = p.n.unwrap_or(4);
    if n < 2 {
        return Err(bad("line_reversal needs n >= 2"));
    }
    let kappa = p.kappa.unwrap_or((n as u32 - 2).max(1));
    let rounds = p.rounds.unwrap_or(kappa + n as u32);
    if kappa == 0 || rounds <= kappa {
        return Err(bad(format!("need 1 <= kappa < rounds, got kappa = {kappa}, rounds = {rounds}")));
    }
    let ids: Vec<u32> = (1..=n as u32).collect();
    let mut fwd = CommGraph::empty(n);
    line(&mut fwd, &ids);
    let mut rev = CommGraph::empty(n);
    line(&mut rev, &ids.iter().rev().copied().collect::<Vec<_>>());
    let mut out = vec![fwd; kappa as usize];
    out.resize(rounds as usize, rev);
    Ok((n, out))
}

/// Two chains of `t+1` processes and a relay: `1..=t+1` headed by 1, `t+2..=2t+2` headed by
/// `t+2`, relay `2t+3`. Rounds `1..=t` close them into one ring; from `t+1` the relay is the
/// only root, feeding the second chain and the reversed first chain.
fn ring_split(p: &ScenarioParams) -> Result<(usize, Vec<CommGraph>)> {
    let t = p.t.unwrap_or(2);
    if t == 0 {
        return Err(bad("ring_split needs t >= 1"));
    }
    let n = 2 * t as usize + 3;
    if p.n.is_some_and(|m| m != n) {
        return Err(bad(format!("ring_split with t = {t} has n = {n}")));
    }
    let rounds = p.rounds.unwrap_or(t + n as u32);
    if rounds <= t {
        return Err(bad(format!("rounds = {rounds} must exceed t = {t}")));
    }
    let first: Vec<u32> = (1..=t + 1).collect();
    let second: Vec<u32> = (t + 2..=2 * t + 2).collect();
    let relay = 2 * t + 3;
    let (head_p, tail_t) = (first[0], *first.last().expect("nonempty"));
    let (head_q, tail_s) = (second[0], *second.last().expect("nonempty"));

    let mut ring = CommGraph::empty(n);
    line(&mut ring, &first);
    line(&mut ring, &second);
    edge(&mut ring, tail_s, head_p);
    edge(&mut ring, tail_t, relay);
    edge(&mut ring, relay, head_q);

    let mut split = CommGraph::empty(n);
    line(&mut split, &second);
    line(&mut split, &first.iter().rev().copied().collect::<Vec<_>>());
    edge(&mut split, relay, head_q);
    edge(&mut split, relay, tail_t);

    let mut out = vec![ring; t as usize];
    out.resize(rounds as usize, split);
    Ok((n, out))
}

/// Processes 1 and 2 joined by a link following `pattern` before round `t`, silent from `t`.
/// Any further processes stay isolated.
fn lossy_link(p: &ScenarioParams) -> Result<(usize, Vec<CommGraph>)> {
    let n = p.n.unwrap_or(2);
    let t = p.t.unwrap_or(6);
    let rounds = p.rounds.unwrap_or(t + 2);
    let pattern = p.pattern.as_deref().unwrap_or("x");
    if n < 2 || t == 0 || rounds < t {
        return Err(bad(format!("need n >= 2, t >= 1, rounds >= t; got n = {n}, t = {t}, rounds = {rounds}")));
    }
    if pattern.is_empty() || pattern.chars().any(|c| !matches!(c, 'f' | 'b' | 'x')) {
        return Err(bad(format!("pattern {pattern:?} must be a nonempty string over f, b, x")));
    }
    let dirs: Vec<char> = pattern.chars().collect();
    let out = (1..=rounds)
        .map(|r| {
            let mut g = CommGraph::empty(n);
            if r < t {
                let c = dirs[(r as usize - 1) % dirs.len()];
                if c != 'b' {
                    edge(&mut g, 1, 2);
                }
                if c != 'f' {
                    edge(&mut g, 2, 1);
                }
            }
            g
        })
        .collect();
    Ok((n, out))
}

/// Processes `1..k-1` isolated; the rest form one weakly connected part with a single root.
/// That root changes every round except over `[r_ST, r_ST+l-1]`, `l = min(n-k, H) - 1`, where
/// a static line `k -> .. -> n` puts its tail at distance `l+1` from its head.
fn singleton_partitions(p: &ScenarioParams) -> Result<(usize, Vec<CommGraph>)> {
    let n = p.n.unwrap_or(5);
    let k = p.k.unwrap_or(2);
    if k == 0 || n < k + 1 {
        return Err(bad(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    let h = p.h.unwrap_or((n - k) as u32);
    let r_st = p.r_st.unwrap_or(3);
    if r_st == 0 {
        return Err(bad("r_ST must be >= 1"));
    }
    let ell = ((n - k) as u32).min(h).saturating_sub(1);
    let rest: Vec<u32> = (k as u32..=n as u32).collect();
    let rounds = p.rounds.unwrap_or(r_st + ell + rest.len() as u32);

    let mut stable = CommGraph::empty(n);
    line(&mut stable, &rest);
    // Alternating shapes whose roots differ from each other and from `{k}`.
    let mut reversed = CommGraph::empty(n);
    line(&mut reversed, &rest.iter().rev().copied().collect::<Vec<_>>());
    let mut ring = CommGraph::empty(n);
    line(&mut ring, &rest);
    edge(&mut ring, *rest.last().expect("nonempty"), rest[0]);

    let window = r_st..r_st + ell;
    let out = (1..=rounds)
        .map(|r| {
            if window.contains(&r) {
                stable.clone()
            } else if r % 2 == 1 {
                reversed.clone()
            } else {
                ring.clone()
            }
        })
        .collect();
    Ok((n, out))
}

/// Groups `D_0..D_{c-1}` (`c = ceil(k/2)`) are pairs `{1,2}, {3,4}, ..` with a singleton
/// `{k}` last when `k` is odd; `D_c = {k+1}`; processes `k+2..=n` hang off `k+1`.
///
/// Phase 0 leaves `k+1` without in-edges. Phase `j >= 1` cuts the internal link of
/// `D_{j-1}` and gives it no in-edges. Pairs not yet cut carry a one-way link alternating
/// direction each round; groups already forced get in-edges from the current group. After
/// phase `c` the graph is the static line `1 -> .. -> n`.
fn phase_decider(p: &ScenarioParams) -> Result<(usize, Vec<CommGraph>)> {
    let n = p.n.unwrap_or(5);
    let k = p.k.unwrap_or(3);
    if k < 2 || n < k + 1 {
        return Err(bad(format!("need 2 <= k < n, got k = {k}, n = {n}")));
    }
    let phase_len = p.phase_len.unwrap_or(4);
    if phase_len == 0 {
        return Err(bad("phase_len must be >= 1"));
    }
    let c = k.div_ceil(2);
    let mut groups: Vec<Vec<u32>> = (0..c)
        .map(|i| {
            let a = 2 * i as u32 + 1;
            if a < k as u32 {
                vec![a, a + 1]
            } else {
                vec![a]
            }
        })
        .collect();
    let pivot = k as u32 + 1;
    groups.push(vec![pivot]);
    let phases = c as u32 + 1;
    let rounds = p.rounds.unwrap_or(phases * phase_len + n as u32);

    let all: Vec<u32> = (1..=n as u32).collect();
    let mut last = CommGraph::empty(n);
    line(&mut last, &all);

    let out = (1..=rounds)
        .map(|r| {
            let phase = ((r - 1) / phase_len) as usize;
            if phase >= phases as usize {
                return last.clone();
            }
            let mut g = CommGraph::empty(n);
            line(&mut g, &(pivot..=n as u32).collect::<Vec<_>>());
            // Group forced in this phase, and the source of in-edges for forced groups.
            let current = if phase == 0 { c } else { phase - 1 };
            let source = groups[current][0];
            for (i, grp) in groups.iter().enumerate() {
                let forced = if i == c { phase > 0 } else { i + 1 < phase };
                if i == current {
                    continue;
                }
                if forced {
                    for &m in grp {
                        edge(&mut g, source, m);
                    }
                    if grp.len() == 2 {
                        edge(&mut g, grp[0], grp[1]);
                        edge(&mut g, grp[1], grp[0]);
                    }
                } else if grp.len() == 2 {
                    if r % 2 == 1 {
                        edge(&mut g, grp[0], grp[1]);
                    } else {
                        edge(&mut g, grp[1], grp[0]);
                    }
                }
            }
            g
        })
        .collect();
    Ok((n, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyngraph::{enumerate_vsrcs, procs, ProcSet};

    fn params() -> ScenarioParams {
        ScenarioParams::default()
    }

    #[test]
    fn static_star_rounds() {
        let p = ScenarioParams { n: Some(5), rounds: Some(10), ..params() };
        let seq = scenario("static_star", &p).unwrap();
        assert_eq!(seq.len(), 10);
        for g in seq.rounds() {
            assert_eq!(g.edges(), vec![(1, 2), (1, 3), (1, 4), (1, 5)]);
            assert_eq!(g.root_components(), vec![procs(&[1])]);
        }
    }

    #[test]
    fn line_reversal_switches_after_kappa() {
        let p = ScenarioParams { n: Some(4), kappa: Some(3), rounds: Some(8), ..params() };
        let seq = scenario("line_reversal", &p).unwrap();
        for r in 1..=3 {
            assert_eq!(seq.round(r).unwrap().edges(), vec![(1, 2), (2, 3), (3, 4)]);
        }
        for r in 4..=8 {
            assert_eq!(seq.round(r).unwrap().edges(), vec![(2, 1), (3, 2), (4, 3)]);
        }
        let vs = enumerate_vsrcs(&seq);
        assert_eq!(vs.len(), 2);
        assert_eq!((vs[0].members, vs[0].len()), (procs(&[1]), 3));
        assert_eq!((vs[1].members, vs[1].len()), (procs(&[4]), 5));
    }

    #[test]
    fn ring_split_structure() {
        let p = ScenarioParams { t: Some(3), ..params() };
        let seq = scenario("ring_split", &p).unwrap();
        assert_eq!(seq.n(), 9);
        for r in 1..=3 {
            let g = seq.round(r).unwrap();
            assert_eq!(g.root_components(), vec![ProcSet::full(9)]);
            assert_eq!(g.edge_count(), 9);
        }
        let g = seq.round(4).unwrap();
        assert_eq!(g.root_components(), vec![procs(&[9])]);
        assert!(g.has_edge(Pid(9), Pid(5)) && g.has_edge(Pid(9), Pid(4)) && g.has_edge(Pid(2), Pid(1)));
        assert!(g.edges().iter().all(|&(u, v)| !(u <= 4 && (5..=8).contains(&v)) && !(v <= 4 && (5..=8).contains(&u))));
    }

    #[test]
    fn lossy_link_has_a_link_until_t() {
        let p = ScenarioParams { t: Some(6), pattern: Some("fbx".into()), rounds: Some(9), ..params() };
        let seq = scenario("lossy_link", &p).unwrap();
        let expected: [&[(u32, u32)]; 5] = [&[(1, 2)], &[(2, 1)], &[(1, 2), (2, 1)], &[(1, 2)], &[(2, 1)]];
        for (r, e) in (1..=5).zip(expected) {
            assert_eq!(seq.round(r).unwrap().edges(), e.to_vec());
        }
        for r in 6..=9 {
            assert_eq!(seq.round(r).unwrap().edge_count(), 0);
        }
        assert!(scenario("lossy_link", &ScenarioParams { pattern: Some("q".into()), ..params() }).is_err());
    }

    #[test]
    fn singleton_partitions_window() {
        let p = ScenarioParams { n: Some(7), k: Some(3), r_st: Some(4), ..params() };
        let seq = scenario("singleton_partitions", &p).unwrap();
        // l = min(4, 4) - 1 = 3.
        for r in 1..=seq.len() {
            let roots = seq.round(r).unwrap().root_components();
            assert_eq!(roots.len(), 3);
            assert_eq!(&roots[..2], &[procs(&[1]), procs(&[2])]);
        }
        let vs: Vec<_> = enumerate_vsrcs(&seq).into_iter().filter(|v| v.members == procs(&[3])).collect();
        assert_eq!(vs.len(), 1);
        assert_eq!((vs[0].interval.a, vs[0].interval.b), (4, 6));
        // The head does not reach the tail within the window.
        let reached = crate::dyngraph::reach_within(&seq, procs(&[3]), 4, 3);
        assert_eq!(reached, procs(&[3, 4, 5, 6]));
    }

    #[test]
    fn phase_decider_root_counts() {
        for (n, k) in [(5usize, 3usize), (6, 4), (4, 2), (8, 5)] {
            let p = ScenarioParams { n: Some(n), k: Some(k), phase_len: Some(3), ..params() };
            let seq = scenario("phase_decider", &p).unwrap();
            let c = k.div_ceil(2);
            let phases = c as u32 + 1;
            for r in 1..=seq.len() {
                let roots = seq.round(r).unwrap().root_components();
                if r > phases * 3 {
                    assert_eq!(roots, vec![procs(&[1])]);
                } else {
                    assert!(roots.len() <= c + 1, "n={n} k={k} r={r}: {roots:?}");
                }
                if r <= 3 {
                    assert!(roots.contains(&procs(&[k as u32 + 1])));
                }
            }
            // Phase 1 cuts the first pair apart.
            let roots = seq.round(4).unwrap().root_components();
            assert!(roots.contains(&procs(&[1])) && roots.contains(&procs(&[2])));
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(scenario("nope", &params()), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn byte_deterministic() {
        for name in SCENARIOS {
            let a = scenario(name, &params()).unwrap().to_json().unwrap();
            let b = scenario(name, &params()).unwrap().to_json().unwrap();
            assert_eq!(a, b);
        }
    }
}
