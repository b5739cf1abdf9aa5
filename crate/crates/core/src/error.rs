use thiserror::Error;

use crate::filter_lab::Subset;
use crate::ramsey::Coloring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("window length mismatch: {left} vs {right}")]
    WindowMismatch { left: usize, right: usize },

    #[error("shift by {shift} leaves no window (window length {len})")]
    EmptyWindow { shift: usize, len: usize },

    #[error("{what} = {value} out of range (allowed {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid interval family: {0}")]
    InvalidFamily(String),

    #[error("parse error at line {line}: unexpected `{token}`")]
    Parse { line: usize, token: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("set is not piecewise syndetic at d = {d}, N = {n}")]
    NotPiecewiseSyndetic { d: usize, n: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("generators {indices:?} have empty intersection")]
    EmptyIntersection { indices: Vec<usize> },

    #[error("predicate is not a superfilter: {0}")]
    NotSuperfilter(String),

    #[error("subset {subset:#b} is not contained in a universe of size {size}")]
    SubsetOutOfUniverse { subset: Subset, size: usize },

    #[error("search budget exhausted after {nodes} nodes (best coloring has length {})", best.len())]
    BudgetExhausted { nodes: u64, best: Coloring },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
