//! Expander-based single-root topologies.
//!
//! Two random regular undirected graphs, one on the root set and one on all processes, are
//! oriented both ways and merged; edges entering the root from outside are dropped.
//! The recorded expansion is a certified lower bound: exact for small vertex sets, otherwise
//! the spectral bound for regular graphs.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyngraph::{CommGraph, Continuation, GraphSequence, Pid, ProcSet, SeqMetadata, SeqParams};
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 10;
const EXACT_LIMIT: usize = 16;
const SAMPLE_RETRIES: usize = 20;
const BUILD_RESTARTS: usize = 200;

/// An undirected simple graph on `0..m` as adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Undirected {
    adj: Vec<u128>,
}

impl Undirected {
    fn complete(m: usize) -> Self {
        let all = if m >= 128 { u128::MAX } else { (1u128 << m) - 1 };
        Undirected { adj: (0..m).map(|i| all & !(1u128 << i)).collect() }
    }

    fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    fn is_regular(&self) -> bool {
        self.adj.iter().all(|a| a.count_ones() == self.adj[0].count_ones())
    }
}

/// Random `deg`-regular graph by sequential stub matching with restarts.
fn random_regular(m: usize, deg: usize, rng: &mut ChaCha8Rng) -> Undirected {
    if deg + 1 >= m {
        return Undirected::complete(m);
    }
    let deg = if m * deg % 2 == 1 { deg - 1 } else { deg };
    'restart: for _ in 0..BUILD_RESTARTS {
        let mut adj = vec![0u128; m];
        let mut stubs: Vec<usize> = (0..m).flat_map(|v| std::iter::repeat(v).take(deg)).collect();
        while !stubs.is_empty() {
            let mut placed = false;
            for _ in 0..64 {
                let i = rng.gen_range(0..stubs.len());
                let j = rng.gen_range(0..stubs.len());
                let (u, v) = (stubs[i], stubs[j]);
                if i == j || u == v || adj[u] >> v & 1 == 1 {
                    continue;
                }
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                placed = true;
                break;
            }
            if !placed {
                continue 'restart;
            }
        }
        return Undirected { adj };
    }
    Undirected::complete(m)
}

/// Lower bound on `min |N(S) \ S| / |S|` over `1 <= |S| <= m/2`.
/// Infinite when no such set exists (m <= 1).
pub fn certified_expansion(adj: &[u128]) -> f64 {
    let m = adj.len();
    if m <= 1 {
        return f64::INFINITY;
    }
    if m <= EXACT_LIMIT {
        return exact_expansion(adj);
    }
    let g = Undirected { adj: adj.to_vec() };
    if !g.is_regular() {
        return 0.0;
    }
    spectral_expansion(&g)
}

fn exact_expansion(adj: &[u128]) -> f64 {
    let m = adj.len();
    let mut best = f64::INFINITY;
    for s in 1u32..(1u32 << m) {
        let size = s.count_ones() as usize;
        if size > m / 2 {
            continue;
        }
        let mut nb = 0u128;
        for (i, a) in adj.iter().enumerate() {
            if s >> i & 1 == 1 {
                nb |= a;
            }
        }
        let out = (nb & !(s as u128)).count_ones() as f64;
        best = best.min(out / size as f64);
    }
    best
}

/// For a d-regular graph with second eigenvalue modulus `l`, every `S` with `|S| <= m/2`
/// has at least `d^2 |S| / (l^2 + (d^2 - l^2)/2)` neighbours (Tanner), so
/// `|N(S) \ S| / |S|` is at least that ratio minus one.
fn spectral_expansion(g: &Undirected) -> f64 {
    let m = g.adj.len();
    let d = g.degree(0) as f64;
    let a = DMatrix::from_fn(m, m, |i, j| if g.adj[i] >> j & 1 == 1 { 1.0 } else { 0.0 });
    let mut eig: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    let lambda = eig[1].abs().max(eig[m - 1].abs());
    let l2 = lambda * lambda;
    let d2 = d * d;
    (d2 / (l2 + (d2 - l2) / 2.0) - 1.0).max(0.0)
}

/// Single-root graph with root `root` and its certified expansion.
#[derive(Clone, Debug)]
pub struct ExpanderGraph {
    pub graph: CommGraph,
    pub alpha: f64,
}

fn sample(n: usize, root: ProcSet, rng: &mut ChaCha8Rng) -> ExpanderGraph {
    let members: Vec<Pid> = root.iter().collect();
    let on_root = random_regular(members.len(), MAX_DEGREE, rng);
    let on_all = random_regular(n, MAX_DEGREE, rng);
    let mut g = CommGraph::empty(n);
    for (i, a) in on_all.adj.iter().enumerate() {
        for j in 0..n {
            if a >> j & 1 == 1 {
                let (u, v) = (Pid::from_index(i), Pid::from_index(j));
                if root.contains(v) && !root.contains(u) {
                    continue;
                }
                g.add_edge(u, v);
            }
        }
    }
    for (i, a) in on_root.adj.iter().enumerate() {
        for (j, &v) in members.iter().enumerate() {
            if a >> j & 1 == 1 {
                g.add_edge(members[i], v);
            }
        }
    }
    let alpha = certified_expansion(&on_root.adj).min(certified_expansion(&on_all.adj));
    ExpanderGraph { graph: g, alpha }
}

/// Samples up to a bounded number of candidates and returns the first whose certified
/// expansion reaches `alpha`; errors with the best value seen otherwise.
pub fn gen_expander_graph(n: usize, root: ProcSet, alpha: f64, seed: u64) -> Result<ExpanderGraph> {
    if root.is_empty() || !root.is_subset(ProcSet::full(n)) {
        return Err(Error::InvalidParams(format!("root {root} must be a nonempty subset of 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..SAMPLE_RETRIES {
        let cand = sample(n, root, &mut rng);
        if cand.alpha >= alpha {
            return Ok(cand);
        }
        best = best.max(cand.alpha);
    }
    Err(Error::ExpanderSampling { achieved: best, target: alpha })
}

/// A static expander sequence over `rounds` rounds with a random root of size `root_size`.
pub fn gen_expander_sequence(n: usize, root_size: usize, alpha: f64, rounds: u32, seed: u64) -> Result<GraphSequence> {
    if root_size == 0 || root_size > n {
        return Err(Error::InvalidParams(format!("root size {root_size} not in 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<Pid> = ProcSet::full(n).iter().collect();
    ids.shuffle(&mut rng);
    let root: ProcSet = ids[..root_size].iter().copied().collect();
    let eg = gen_expander_graph(n, root, alpha, rng.gen())?;
    let seq = GraphSequence::new(n, vec![eg.graph; rounds as usize], Continuation::RepeatLast)?;
    Ok(seq.with_metadata(SeqMetadata {
        adversary: "expander".into(),
        params: SeqParams { n, alpha: Some(eg.alpha), seed: Some(seed), ..Default::default() },
    }))
}
