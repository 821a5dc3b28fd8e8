//! Message adversaries: feasibility validators, sequence generators and proof-construction scenarios.

mod expander;
mod generate;
mod scenario;
mod validate;

use std::fmt;

use serde::Serialize;

use crate::dyngraph::{Interval, Vsrc};

pub use expander::{certified_expansion, gen_expander_graph, gen_expander_sequence, ExpanderGraph};
pub use generate::{
    gen_good_sequence, gen_stable_majinf_sequence, random_sequence, single_root_graph, GoodStyle, MajinfVariant,
};
pub use scenario::{scenario, ScenarioParams, SCENARIOS};
pub use validate::{validate_good, validate_majinf, validate_sigma, validate_stable, DEFAULT_SIGMA_CAP};

/// Where a violation applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    Round { round: u32 },
    Interval { interval: Interval },
    Global,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Round { round } => write!(f, "round {round}"),
            Scope::Interval { interval } => write!(f, "interval {interval}"),
            Scope::Global => write!(f, "global"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub scope: Scope,
    pub rule: String,
    pub detail: String,
}

/// Evidence for a satisfied existential clause.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub rule: String,
    pub vsrcs: Vec<Vsrc>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub adversary: String,
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl FeasibilityReport {
    fn new(adversary: &str) -> Self {
        FeasibilityReport { adversary: adversary.into(), ..Default::default() }
    }

    fn violate(&mut self, scope: Scope, rule: &str, detail: impl Into<String>) {
        self.violations.push(Violation { scope, rule: rule.into(), detail: detail.into() });
    }

    fn witness(&mut self, rule: &str, vsrcs: Vec<Vsrc>, detail: impl Into<String>) {
        self.witnesses.push(Witness { rule: rule.into(), vsrcs, detail: detail.into() });
    }

    fn finish(mut self) -> Self {
        self.feasible = self.violations.is_empty();
        self
    }

    /// Violations of one rule.
    pub fn violations_of<'a>(&'a self, rule: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations.iter().filter(move |v| v.rule == rule)
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.adversary, if self.feasible { "feasible" } else { "infeasible" })?;
        for v in &self.violations {
            writeln!(f, "  violation [{}] {}: {}", v.rule, v.scope, v.detail)?;
        }
        for w in &self.witnesses {
            let vs: Vec<String> = w.vsrcs.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  witness [{}] {} {}", w.rule, vs.join(" "), w.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
