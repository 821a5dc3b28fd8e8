//! Oblivious generators for the single-root and k-root adversaries.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expander::gen_expander_graph;
use crate::dyngraph::{
    spread, CommGraph, Continuation, GraphSequence, Pid, ProcSet, SeqMetadata, SeqParams, MAX_PROCESSES,
};
use crate::error::{Error, Result};

/// Probability of each optional chord inside a root.
const CHORD_PROB: f64 = 0.3;
/// Probability of each optional edge that does not enter the root.
const EXTRA_PROB: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoodStyle {
    Random,
    Expander,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajinfVariant {
    Partition,
    MergeChain,
}

impl FromStr for GoodStyle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(GoodStyle::Random),
            "expander" => Ok(GoodStyle::Expander),
            _ => Err(Error::InvalidParams(format!("unknown style {s:?}"))),
        }
    }
}

impl fmt::Display for GoodStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GoodStyle::Random => "random",
            GoodStyle::Expander => "expander",
        })
    }
}

impl FromStr for MajinfVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partition" => Ok(MajinfVariant::Partition),
            "merge_chain" => Ok(MajinfVariant::MergeChain),
            _ => Err(Error::InvalidParams(format!("unknown variant {s:?}"))),
        }
    }
}

impl fmt::Display for MajinfVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MajinfVariant::Partition => "partition",
            MajinfVariant::MergeChain => "merge_chain",
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_PROCESSES).contains(&n) {
        return Err(Error::InvalidParams(format!("n = {n} not in 2..={MAX_PROCESSES}")));
    }
    Ok(())
}

/// Strongly connects `members`: a shuffled cycle plus random chords when the cycle length
/// keeps the diameter within `max_diam`, otherwise all edges.
fn connect_root<R: Rng>(g: &mut CommGraph, root: ProcSet, max_diam: u32, rng: &mut R) {
    let mut members: Vec<Pid> = root.iter().collect();
    if members.len() < 2 {
        return;
    }
    members.shuffle(rng);
    let cycle = members.len() - 1 <= max_diam as usize;
    for (i, &u) in members.iter().enumerate() {
        for (j, &v) in members.iter().enumerate() {
            if i == j {
                continue;
            }
            let on_cycle = (i + 1) % members.len() == j;
            if !cycle || on_cycle || rng.gen_bool(CHORD_PROB) {
                g.add_edge(u, v);
            }
        }
    }
}

/// A random graph on `1..=n` whose only root component is `root`.
///
/// `root` is strongly connected with diameter at most `max_diam`, every other process gets an
/// in-edge from an already attached one, and no edge enters `root` from outside.
pub fn single_root_graph<R: Rng>(n: usize, root: ProcSet, max_diam: u32, rng: &mut R) -> CommGraph {
    let mut g = CommGraph::empty(n);
    connect_root(&mut g, root, max_diam, rng);
    let mut attached: Vec<Pid> = root.iter().collect();
    let mut rest: Vec<Pid> = ProcSet::full(n).difference(root).iter().collect();
    rest.shuffle(rng);
    for v in rest {
        let u = *attached.choose(rng).expect("root is nonempty");
        g.add_edge(u, v);
        attached.push(v);
    }
    for u in ProcSet::full(n).iter() {
        for v in ProcSet::full(n).difference(root).iter() {
            if u != v && !g.has_edge(u, v) && rng.gen_bool(EXTRA_PROB) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

fn random_subset<R: Rng>(n: usize, sizes: std::ops::RangeInclusive<usize>, rng: &mut R) -> ProcSet {
    let size = rng.gen_range(sizes);
    let mut ids: Vec<Pid> = ProcSet::full(n).iter().collect();
    ids.shuffle(rng);
    ids[..size].iter().copied().collect()
}

/// A random nonempty proper subset avoiding every set in `avoid`.
fn fresh_proper_subset<R: Rng>(n: usize, avoid: &[ProcSet], rng: &mut R) -> ProcSet {
    loop {
        let s = random_subset(n, 1..=n - 1, rng);
        if !avoid.contains(&s) {
            return s;
        }
    }
}

/// Rounds needed for `root` to reach every process under a static graph; `None` if never.
fn static_reach_rounds(g: &CommGraph, root: ProcSet) -> Option<u32> {
    let all = g.vertices();
    let mut cur = root;
    let mut rounds = 0;
    while cur != all {
        let next = spread(g, cur);
        if next == cur {
            return None;
        }
        cur = next;
        rounds += 1;
    }
    Some(rounds)
}

fn log_ceil(x: f64, alpha: f64) -> u32 {
    if x <= 1.0 {
        return 0;
    }
    (x.ln() / alpha.ln_1p()).ceil() as u32
}

/// Network causal diameter bound for a static expander with root size `r` and expansion `alpha`.
fn expander_h(n: usize, r: usize, alpha: f64) -> u32 {
    let cap = n as u32 - 1;
    if !(alpha > 0.0) {
        return cap;
    }
    let bound = 2 * log_ceil(r as f64 / 2.0, alpha) + 2 * log_ceil(n as f64 / 2.0, alpha) + 2;
    bound.min(cap)
}

/// A prefix of length `r_ST + d + 3H` with exactly one root per round and a fresh root that
/// stays vertex-stable over `[r_ST, r_ST+d-1]`.
///
/// The random style declares `H = n-1`. The expander style uses a static expander over the
/// window, changes the root every round outside it, and declares the smaller bound derived from
/// the certified expansion (falling back to `n-1`).
pub fn gen_good_sequence(n: usize, d: u32, r_st: u32, seed: u64, style: GoodStyle) -> Result<GraphSequence> {
    check_n(n)?;
    if d == 0 || r_st == 0 {
        return Err(Error::InvalidParams(format!("need d >= 1 and r_ST >= 1, got d = {d}, r_ST = {r_st}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unbounded = n as u32;
    let (window_root, window_graph, h, alpha) = match style {
        GoodStyle::Random => (random_subset(n, 1..=n, &mut rng), None, n as u32 - 1, None),
        GoodStyle::Expander => {
            let root = random_subset(n, n.div_ceil(2)..=n, &mut rng);
            let eg = gen_expander_graph(n, root, 0.0, rng.gen())?;
            let mut h = expander_h(n, root.len(), eg.alpha);
            match static_reach_rounds(&eg.graph, root) {
                Some(need) if need <= h => {}
                _ => h = n as u32 - 1,
            }
            (root, Some(eg.graph), h, Some(eg.alpha))
        }
    };
    let len = r_st + d + 3 * h;
    let window_end = r_st + d - 1;
    let mut rounds = Vec::with_capacity(len as usize);
    let mut prev = ProcSet::EMPTY;
    for r in 1..=len {
        let g = if (r_st..=window_end).contains(&r) {
            prev = window_root;
            match &window_graph {
                Some(g) => g.clone(),
                None => single_root_graph(n, window_root, unbounded, &mut rng),
            }
        } else {
            let mut avoid = vec![prev];
            if r + 1 == r_st {
                avoid.push(window_root);
            }
            let root = match style {
                // Arbitrary roots: long VSRCs are (n-1)-network-bounded anyway.
                GoodStyle::Random if r != window_end + 1 && r + 1 != r_st => random_subset(n, 1..=n, &mut rng),
                // One-round VSRCs keep the smaller H vacuous outside the window.
                _ => loop {
                    let s = random_subset(n, 1..=n, &mut rng);
                    if !avoid.contains(&s) {
                        break s;
                    }
                },
            };
            prev = root;
            single_root_graph(n, root, unbounded, &mut rng)
        };
        rounds.push(g);
    }
    let seq = GraphSequence::new(n, rounds, Continuation::None)?;
    Ok(seq.with_metadata(SeqMetadata {
        adversary: "good".into(),
        params: SeqParams {
            n,
            d: Some(d),
            big_h: Some(h),
            r_st: Some(r_st),
            alpha,
            seed: Some(seed),
            ..Default::default()
        },
    }))
}

/// A prefix of length `r_ST + 3D + 2H` (`H = n-1`, last graph repeating) with at most `k` roots
/// per round and at most `k` VSRCs of length `2D+1` lacking a majority influencer.
///
/// `Partition`: one-round roots before `r_ST`, then `k` isolated strongly connected groups.
/// `MergeChain`: a chain of `2D+1`-round roots separated by one complete round, so each is
/// fully influenced by every earlier one, ending in a single stable root from `r_ST`.
pub fn gen_stable_majinf_sequence(
    n: usize,
    k: usize,
    big_d: u32,
    r_st: u32,
    seed: u64,
    variant: MajinfVariant,
) -> Result<GraphSequence> {
    check_n(n)?;
    if k == 0 || n <= k {
        return Err(Error::InvalidParams(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    if big_d == 0 || r_st == 0 {
        return Err(Error::InvalidParams(format!("need D >= 1 and r_ST >= 1, got D = {big_d}, r_ST = {r_st}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = n as u32 - 1;
    let len = r_st + 3 * big_d + 2 * h;
    let pre = (r_st - 1) as usize;
    let mut rounds = Vec::with_capacity(len as usize);
    match variant {
        MajinfVariant::Partition => {
            let mut ids: Vec<Pid> = ProcSet::full(n).iter().collect();
            ids.shuffle(&mut rng);
            let mut cuts: Vec<usize> = rand::seq::index::sample(&mut rng, n - 1, k - 1).into_iter().map(|c| c + 1).collect();
            cuts.sort_unstable();
            cuts.push(n);
            let mut groups = Vec::with_capacity(k);
            let mut start = 0;
            for c in cuts {
                groups.push(ids[start..c].iter().copied().collect::<ProcSet>());
                start = c;
            }
            let mut prev = ProcSet::EMPTY;
            for r in 1..=pre {
                let mut avoid = vec![prev];
                if r == pre {
                    avoid.extend(&groups);
                }
                prev = fresh_proper_subset(n, &avoid, &mut rng);
                rounds.push(single_root_graph(n, prev, big_d, &mut rng));
            }
            for _ in pre as u32 + 1..=len {
                let mut g = CommGraph::empty(n);
                for &grp in &groups {
                    connect_root(&mut g, grp, big_d, &mut rng);
                }
                rounds.push(g);
            }
        }
        MajinfVariant::MergeChain => {
            let block = 2 * big_d as usize + 2;
            let chain = pre / block;
            let churn = pre - chain * block;
            let mut chain_roots: Vec<ProcSet> = Vec::with_capacity(chain);
            for _ in 0..chain {
                let avoid: Vec<ProcSet> = chain_roots.last().copied().into_iter().collect();
                chain_roots.push(fresh_proper_subset(n, &avoid, &mut rng));
            }
            let last_chain = chain_roots.last().copied();
            let mut prev = ProcSet::EMPTY;
            let mut churn_roots = Vec::with_capacity(churn);
            for i in 0..churn {
                let mut avoid = vec![prev];
                if i + 1 == churn {
                    avoid.extend(chain_roots.first());
                }
                prev = fresh_proper_subset(n, &avoid, &mut rng);
                churn_roots.push(prev);
            }
            let before_final = if chain > 0 { ProcSet::full(n) } else { churn_roots.last().copied().unwrap_or_default() };
            let final_root = fresh_proper_subset(n, &[before_final, last_chain.unwrap_or_default()], &mut rng);
            for root in churn_roots {
                rounds.push(single_root_graph(n, root, big_d, &mut rng));
            }
            for root in chain_roots {
                for _ in 0..block - 1 {
                    rounds.push(single_root_graph(n, root, big_d, &mut rng));
                }
                rounds.push(CommGraph::complete(n));
            }
            for _ in pre as u32 + 1..=len {
                rounds.push(single_root_graph(n, final_root, big_d, &mut rng));
            }
        }
    }
    let seq = GraphSequence::new(n, rounds, Continuation::RepeatLast)?;
    Ok(seq.with_metadata(SeqMetadata {
        adversary: format!("stable_majinf/{variant}"),
        params: SeqParams {
            n,
            k: Some(k),
            d: Some(3 * big_d + h),
            big_d: Some(big_d),
            big_h: Some(h),
            r_st: Some(r_st),
            seed: Some(seed),
            ..Default::default()
        },
    }))
}

/// Unconstrained sequence: every ordered pair is an edge independently with probability `edge_prob`.
pub fn random_sequence(n: usize, rounds: u32, edge_prob: f64, seed: u64) -> Result<GraphSequence> {
    if n == 0 || n > MAX_PROCESSES {
        return Err(Error::InvalidParams(format!("n = {n} not in 1..={MAX_PROCESSES}")));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidParams(format!("edge probability {edge_prob} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graphs = (0..rounds)
        .map(|_| {
            let mut g = CommGraph::empty(n);
            for u in ProcSet::full(n).iter() {
                for v in ProcSet::full(n).iter() {
                    if u != v && rng.gen_bool(edge_prob) {
                        g.add_edge(u, v);
                    }
                }
            }
            g
        })
        .collect();
    let seq = GraphSequence::new(n, graphs, Continuation::None)?;
    Ok(seq.with_metadata(SeqMetadata {
        adversary: "random".into(),
        params: SeqParams { n, seed: Some(seed), ..Default::default() },
    }))
}
