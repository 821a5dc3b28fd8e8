use thiserror::Error;

use crate::dyngraph::Pid;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("round {round} outside prefix 1..={len}")]
    RoundOutOfRange { round: u32, len: u32 },
    #[error("round {round} outside interval [{a},{b}]")]
    OutsideInterval { round: u32, a: u32, b: u32 },
    #[error("intervals overlap or are out of order: [{0},{1}] does not end before [{2},{3}]")]
    OverlappingIntervals(u32, u32, u32, u32),
    #[error("root components do not share one interval")]
    MismatchedIntervals,
    #[error("VSRC {0} is shorter than the required {1} rounds")]
    TooShort(String, u32),
    #[error("duplicate sender {0} in one round")]
    DuplicateSender(Pid),
    #[error("process {0} stepped after termination")]
    StepAfterTermination(Pid),
    #[error("rounds must increase: got {got} after {last}")]
    NonIncreasingRound { got: u32, last: u32 },
    #[error("no lock known for the requested root members")]
    EmptyLockSet,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("expander sampling failed: best certified expansion {achieved:.4} < target {target:.4}")]
    ExpanderSampling { achieved: f64, target: f64 },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
