//! Graph-sequence mathematics: root components, VSRCs, causal influence and influence sets.

mod causal;
mod graph;
mod influence;
mod procset;
mod vsrc;

pub use causal::{
    causal_distance, dynamic_causal_diameter, is_d_bounded, is_h_network_bounded, network_causal_diameter,
    reach_within, spread, CausalDistance, CausalFrontier,
};
pub use graph::{is_strongly_connected, CommGraph, Continuation, GraphSequence, SeqMetadata, SeqParams};
pub use influence::{influence_set, majority_influences, InfluenceTable};
pub use procset::{procs, Pid, ProcSet, MAX_PROCESSES};
pub use vsrc::{enumerate_vsrcs, roots_spanning, vsrcs_from_roots, vsrcs_of_length_at_least, Interval, Vsrc};

/// Per-round root component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RootComponent {
    pub round: u32,
    pub members: ProcSet,
}

/// Root components of round `r`.
pub fn root_components_at(seq: &GraphSequence, r: u32) -> crate::Result<Vec<RootComponent>> {
    Ok(seq.round(r)?.root_components().into_iter().map(|members| RootComponent { round: r, members }).collect())
}
