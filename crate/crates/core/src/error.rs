use thiserror::Error;

use crate::lists::Outcome;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("outcome must be +1 or -1, got {0}")]
    InvalidOutcome(i64),

    #[error("data list must contain at least one outcome")]
    EmptyList,

    #[error("list lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("number of trials must be at least 1")]
    ZeroTrials,

    #[error("angle {name} is not finite ({value})")]
    NonFiniteAngle { name: &'static str, value: f64 },

    #[error(
        "shared setting {name} differs between runs: reference {reference}, candidate {candidate}"
    )]
    SettingMismatch {
        name: &'static str,
        reference: f64,
        candidate: f64,
    },

    #[error("matching left no aligned positions")]
    EmptyOverlap,

    #[error("conditional class {0} is empty")]
    EmptyClass(Outcome),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("scan cell ({row}, {col}) failed: {source}")]
    Cell {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },
}
