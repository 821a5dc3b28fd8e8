//! Trace-level property checks.

use std::fmt;

use serde::Serialize;

use super::engine::Algorithm;
use super::trace::Trace;
use crate::decision::{Value, Via};
use crate::dyngraph::{enumerate_vsrcs, GraphSequence, Interval, Pid};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub processes: Vec<Pid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round: Option<u32>,
    pub values: Vec<Value>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl PropertyReport {
    fn ok(property: &str) -> Self {
        PropertyReport { property: property.into(), holds: true, counterexample: None }
    }

    fn violated(property: &str, cx: Counterexample) -> Self {
        PropertyReport { property: property.into(), holds: false, counterexample: Some(cx) }
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{}: holds", self.property),
            Some(cx) => {
                write!(f, "{}: violated: {}", self.property, cx.detail)?;
                if let Some(r) = cx.round {
                    write!(f, " (round {r})")?;
                }
                Ok(())
            }
        }
    }
}

/// At most `k` distinct decision values.
pub fn check_agreement(trace: &Trace, k: usize) -> PropertyReport {
    let values = trace.decision_values();
    if values.len() <= k {
        return PropertyReport::ok("agreement");
    }
    // One witness per distinct value.
    let mut witnesses = Vec::new();
    for v in &values {
        if let Some(d) = trace.decisions.iter().find(|d| d.value == *v) {
            witnesses.push(d.process);
        }
    }
    PropertyReport::violated(
        "agreement",
        Counterexample {
            processes: witnesses,
            round: None,
            detail: format!("{} distinct values {:?} exceed k = {k}", values.len(), values),
            values,
        },
    )
}

/// Every decision is some process's input.
pub fn check_validity(trace: &Trace) -> PropertyReport {
    match trace.decisions.iter().find(|d| !trace.params.inputs.contains(&d.value)) {
        None => PropertyReport::ok("validity"),
        Some(d) => PropertyReport::violated(
            "validity",
            Counterexample {
                processes: vec![d.process],
                round: Some(d.round),
                values: vec![d.value],
                detail: format!("{} decided {} which is no input", d.process, d.value),
            },
        ),
    }
}

/// Every process decided (exactly once), no later than `bound` if given.
pub fn check_termination(trace: &Trace, bound: Option<u32>) -> PropertyReport {
    for i in 0..trace.params.n {
        let p = Pid::from_index(i);
        let count = trace.decisions.iter().filter(|d| d.process == p).count();
        if count == 0 {
            return PropertyReport::violated(
                "termination",
                Counterexample { processes: vec![p], round: None, values: vec![], detail: format!("{p} never decided") },
            );
        }
        if count > 1 {
            return PropertyReport::violated(
                "termination",
                Counterexample { processes: vec![p], round: None, values: vec![], detail: format!("{p} decided {count} times") },
            );
        }
    }
    if let Some(b) = bound {
        if let Some(d) = trace.decisions.iter().find(|d| d.round > b) {
            return PropertyReport::violated(
                "termination",
                Counterexample {
                    processes: vec![d.process],
                    round: Some(d.round),
                    values: vec![d.value],
                    detail: format!("{} decided at round {} after bound {b}", d.process, d.round),
                },
            );
        }
    }
    PropertyReport::ok("termination")
}

/// Own consensus decisions at round `r` with lock round `l` need a VSRC over `[l-D-1, l+H]`
/// containing the decider and `l+H <= r <= l+H+D`. A repeating last graph counts up to the
/// trace's final round.
pub fn check_lock_provenance(trace: &Trace, seq: &GraphSequence, d: u32, h: u32) -> Result<PropertyReport> {
    if !matches!(trace.params.algorithm, Algorithm::Consensus { .. }) {
        return Err(Error::InvalidParams("lock provenance applies to consensus traces only".into()));
    }
    let last = trace.rounds.last().map_or(0, |r| r.round);
    let vsrcs = enumerate_vsrcs(&seq.extended(last));
    let (d, h) = (d as i64, h as i64);
    for dec in trace.decisions.iter().filter(|x| x.via == Via::Own) {
        let fail = |detail: String| {
            Ok(PropertyReport::violated(
                "lock_provenance",
                Counterexample { processes: vec![dec.process], round: Some(dec.round), values: vec![dec.value], detail },
            ))
        };
        let Some(l) = dec.lock_round else {
            return fail(format!("{} decided without a recorded lock round", dec.process));
        };
        let r = dec.round as i64;
        if r < l + h || r > l + h + d {
            return fail(format!("decision round {r} outside [{}, {}] for lock round {l}", l + h, l + h + d));
        }
        let (a, b) = (l - d - 1, l + h);
        if a < 1 {
            return fail(format!("lock round {l} implies window start {a} < 1"));
        }
        let window = Interval { a: a as u32, b: b as u32 };
        let backed = vsrcs.iter().any(|v| v.members.contains(dec.process) && v.interval.covers(&window));
        if !backed {
            return fail(format!("no VSRC containing {} spans {window}", dec.process));
        }
    }
    Ok(PropertyReport::ok("lock_provenance"))
}
