use thiserror::Error;

use crate::expansion::ExpandedLabel;
use crate::loop_algebra::LoopLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("contradictory structure constant at ({a},{b},{c}): {detail}")]
    ContradictoryEntry {
        a: usize,
        b: usize,
        c: usize,
        detail: String,
    },

    #[error("invalid splitting parameters: {0}")]
    InvalidParams(String),

    #[error("label {0} is not admissible for this splitting")]
    InadmissibleLabel(ExpandedLabel),

    #[error("expanded algebra does not close ({violations} violations)")]
    NotClosed { violations: usize },

    #[error("unknown named case `{0}` (expected G0, G1, G00, G01 or G21)")]
    UnknownCase(String),

    #[error("contraction limit diverges: [{x}, {y}] has a component along {z}")]
    NotContractible {
        x: LoopLabel,
        y: LoopLabel,
        z: LoopLabel,
    },

    #[error("series degree must be at least 1, got {0}")]
    InvalidDegree(usize),

    #[error(
        "series degree {degree} too low for alpha_max {alpha_max} (need degree >= alpha_max + 1)"
    )]
    DegreeTooLow { degree: usize, alpha_max: u32 },

    #[error("unknown built-in algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
