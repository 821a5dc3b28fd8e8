use super::{FeasibilityReport, Scope};
use crate::dyngraph::{
    enumerate_vsrcs, is_d_bounded, is_h_network_bounded, roots_spanning, vsrcs_from_roots, CausalFrontier,
    GraphSequence, InfluenceTable, Interval, Pid, ProcSet, Vsrc,
};
use crate::error::{Error, Result};
use crate::par;

/// Default search budget for the singleton-selection validator.
pub const DEFAULT_SIGMA_CAP: u64 = 1_000_000;

fn window(r_st: u32, d: u32) -> Result<Interval> {
    if r_st == 0 || d == 0 {
        return Err(Error::InvalidParams(format!("need r_ST >= 1 and d >= 1, got r_ST = {r_st}, d = {d}")));
    }
    Ok(Interval { a: r_st, b: r_st + d - 1 })
}

fn check_window_in_prefix(report: &mut FeasibilityReport, seq: &GraphSequence, w: Interval) -> bool {
    if w.b > seq.len() {
        report.violate(
            Scope::Interval { interval: w },
            "undecidable",
            format!("stability window ends at round {} but the prefix has {} rounds", w.b, seq.len()),
        );
        return false;
    }
    true
}

fn note_short_vsrcs(report: &mut FeasibilityReport, vsrcs: &[Vsrc], bound: u32, what: &str) {
    let short = vsrcs.iter().filter(|v| v.len() < bound).count();
    if short > 0 {
        report.notes.push(format!("{short} VSRC(s) shorter than {bound} rounds are vacuously {what}"));
    }
}

/// Exactly one root per round, every VSRC of length >= H is H-network-bounded, and the
/// window `[r_ST, r_ST+d-1]` lies inside one H-network-bounded VSRC.
pub fn validate_good(seq: &GraphSequence, d: u32, h: u32, r_st: u32) -> Result<FeasibilityReport> {
    let w = window(r_st, d)?;
    let mut report = FeasibilityReport::new(&format!("good(d={d}, H={h}, r_ST={r_st})"));
    let roots = seq.roots_per_round();
    for (i, rs) in roots.iter().enumerate() {
        if rs.len() != 1 {
            let list: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
            report.violate(
                Scope::Round { round: i as u32 + 1 },
                "good.i",
                format!("{} root components: {}", rs.len(), list.join(" ")),
            );
        }
    }
    let vsrcs = vsrcs_from_roots(&roots);
    let long: Vec<Vsrc> = vsrcs.iter().copied().filter(|v| v.len() >= h).collect();
    let bounded = par::map(&long, |v| is_h_network_bounded(seq, &[*v], h));
    for (v, ok) in long.iter().zip(bounded) {
        if !ok? {
            report.violate(Scope::Interval { interval: v.interval }, "good.ii", format!("{v} is not {h}-network-bounded"));
        }
    }
    note_short_vsrcs(&mut report, &vsrcs, h, "network-bounded");
    if check_window_in_prefix(&mut report, seq, w) {
        match roots_spanning(&vsrcs, w).as_slice() {
            [v] => {
                let restricted = Vsrc { members: v.members, interval: w };
                if is_h_network_bounded(seq, &[restricted], h)? {
                    report.witness("good.iii", vec![*v], format!("covers window {w}"));
                } else {
                    report.violate(
                        Scope::Interval { interval: w },
                        "good.iii",
                        format!("{} over {w} is not {h}-network-bounded", v.members),
                    );
                }
            }
            [] => report.violate(Scope::Interval { interval: w }, "good.iii", "no single VSRC spans the window"),
            many => report.violate(
                Scope::Interval { interval: w },
                "good.iii",
                format!("{} root components span the window", many.len()),
            ),
        }
    }
    Ok(report.finish())
}

/// At most k roots per round, every VSRC of length >= D is D-bounded, and some set of at most k
/// VSRCs spans `[r_ST, r_ST+d-1]` and is H-network-bounded there.
pub fn validate_stable(seq: &GraphSequence, k: usize, d: u32, big_d: u32, h: u32, r_st: u32) -> Result<FeasibilityReport> {
    let w = window(r_st, d)?;
    let mut report = FeasibilityReport::new(&format!("stable(k={k}, d={d}, D={big_d}, H={h}, r_ST={r_st})"));
    let roots = seq.roots_per_round();
    for (i, rs) in roots.iter().enumerate() {
        if rs.len() > k {
            report.violate(
                Scope::Round { round: i as u32 + 1 },
                "stable.i",
                format!("{} root components exceed k = {k}", rs.len()),
            );
        }
    }
    let vsrcs = vsrcs_from_roots(&roots);
    let long: Vec<Vsrc> = vsrcs.iter().copied().filter(|v| v.len() >= big_d).collect();
    let bounded = par::map(&long, |v| is_d_bounded(seq, v, big_d));
    for (v, ok) in long.iter().zip(bounded) {
        if !ok {
            report.violate(Scope::Interval { interval: v.interval }, "stable.ii", format!("{v} is not {big_d}-bounded"));
        }
    }
    note_short_vsrcs(&mut report, &vsrcs, big_d, "D-bounded");
    if check_window_in_prefix(&mut report, seq, w) {
        let spanning = roots_spanning(&vsrcs, w);
        if spanning.is_empty() {
            report.violate(Scope::Interval { interval: w }, "stable.iii", "no VSRC spans the window");
        } else if spanning.len() > k {
            report.violate(
                Scope::Interval { interval: w },
                "stable.iii",
                format!("{} VSRCs span the window, more than k = {k}", spanning.len()),
            );
        } else {
            let restricted: Vec<Vsrc> = spanning.iter().map(|v| Vsrc { members: v.members, interval: w }).collect();
            if is_h_network_bounded(seq, &restricted, h)? {
                report.witness("stable.iii", spanning.clone(), format!("{} VSRC(s) cover window {w}", spanning.len()));
            } else {
                report.violate(
                    Scope::Interval { interval: w },
                    "stable.iii",
                    format!("spanning set is not {h}-network-bounded over {w}"),
                );
            }
        }
    }
    Ok(report.finish())
}

/// Feasible iff at most k VSRCs of length >= 2D+1 have no majority influencer among them.
pub fn validate_majinf(seq: &GraphSequence, k: usize, big_d: u32) -> Result<FeasibilityReport> {
    let mut report = FeasibilityReport::new(&format!("majinf(k={k}, D={big_d})"));
    let vsrcs = enumerate_vsrcs(seq);
    let table = InfluenceTable::new(seq, &vsrcs, big_d);
    let long = table.long_indices();
    let relation = table.majority_relation();
    let uninfluenced: Vec<Vsrc> = long
        .iter()
        .filter(|&&j| !relation.iter().any(|&(_, s)| s == j))
        .map(|&j| table.vsrcs[j])
        .collect();
    report.notes.push(format!(
        "{} VSRC(s) of length >= {}, {} majority-influence pair(s)",
        long.len(),
        2 * big_d + 1,
        relation.len()
    ));
    if uninfluenced.len() > k {
        let list: Vec<String> = uninfluenced.iter().map(|v| v.to_string()).collect();
        report.violate(
            Scope::Global,
            "majinf",
            format!("{} uninfluenced VSRCs exceed k = {k}: {}", uninfluenced.len(), list.join(" ")),
        );
    } else {
        report.witness("majinf.K", uninfluenced.clone(), format!("|K| = {}", uninfluenced.len()));
    }
    Ok(report.finish())
}

/// Feasible iff no choice of one singleton VSRC per process is free of influence between all pairs.
/// Exceeding `cap` search nodes yields an "undecided" violation.
pub fn validate_sigma(seq: &GraphSequence, cap: u64) -> Result<FeasibilityReport> {
    let mut report = FeasibilityReport::new("sigma");
    let singles: Vec<Vsrc> = enumerate_vsrcs(seq).into_iter().filter(|v| v.members.len() == 1).collect();
    let n = seq.n();
    let mut options: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, v) in singles.iter().enumerate() {
        options[v.members.first().expect("singleton").index()].push(i);
    }
    if let Some(p) = options.iter().position(|o| o.is_empty()) {
        report.notes.push(format!("{} is never a singleton root; no full selection exists", Pid::from_index(p)));
        return Ok(report.finish());
    }
    // influences[i][j]: singles[i] precedes singles[j] and reaches its member in the gap.
    let influences: Vec<Vec<bool>> = par::map(&singles, |cur| {
        let f = CausalFrontier::compute(seq, cur.members, cur.interval.b + 1);
        singles
            .iter()
            .map(|suc| {
                if !cur.precedes(suc) {
                    return false;
                }
                let gap = (suc.interval.a - cur.interval.b - 1) as usize;
                let reached = f.reached.get(gap).or(f.reached.last()).copied().unwrap_or(ProcSet::EMPTY);
                reached.intersects(suc.members)
            })
            .collect()
    });
    let compatible = |i: usize, j: usize| !influences[i][j] && !influences[j][i];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| options[p].len());

    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut nodes = 0u64;
    let mut exceeded = false;
    fn search(
        depth: usize,
        order: &[usize],
        options: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
        cap: u64,
        exceeded: &mut bool,
        compatible: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        for &opt in &options[order[depth]] {
            *nodes += 1;
            if *nodes > cap {
                *exceeded = true;
                return false;
            }
            if chosen.iter().all(|&c| compatible(c, opt)) {
                chosen.push(opt);
                if search(depth + 1, order, options, chosen, nodes, cap, exceeded, compatible) {
                    return true;
                }
                chosen.pop();
                if *exceeded {
                    return false;
                }
            }
        }
        false
    }
    let found = search(0, &order, &options, &mut chosen, &mut nodes, cap, &mut exceeded, &compatible);
    if found {
        let mut sel: Vec<Vsrc> = chosen.iter().map(|&i| singles[i]).collect();
        sel.sort_by_key(|v| v.members);
        report.violate(Scope::Global, "sigma", "every process has a singleton VSRC and none influences another");
        report.witness("sigma.selection", sel, "mutually uninfluenced selection");
    } else if exceeded {
        report.violate(Scope::Global, "sigma.undecided", format!("search exceeded cap of {cap} selections"));
    } else {
        report.notes.push(format!("explored {nodes} partial selections"));
    }
    Ok(report.finish())
}
