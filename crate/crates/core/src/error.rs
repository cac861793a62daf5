use thiserror::Error;

use crate::graph::Vertex;

/// Every failure mode of the recoloring algorithms, the verifier and the
/// file readers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KempeError {
    #[error("color {color} is outside the palette 1..={k}")]
    ColorOutOfRange { color: usize, k: usize },
    #[error("vertex {0} does not exist")]
    VertexOutOfRange(Vertex),
    #[error("degenerate Kempe chain: vertex {vertex} already has color {color}")]
    DegenerateChain { vertex: Vertex, color: usize },
    #[error("invalid move at index {index}: {reason}")]
    InvalidMove { index: usize, reason: String },
    #[error("coloring after move {index} is not proper")]
    ImproperIntermediate { index: usize },
    #[error("coloring is not proper: {0}")]
    ImproperColoring(String),
    #[error("palette too small: need at least {needed} colors, got {k}")]
    PaletteTooSmall { needed: usize, k: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
    #[error("layering failed: residual subgraph on {residual} vertices has minimum degree >= {k}")]
    LayeringFailed { residual: usize, k: usize },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("not a Kempe chain: {0}")]
    NotAChain(String),
    #[error("graph is not chordal: neighbors {a} and {b} of {vertex} are not adjacent")]
    NotChordal { vertex: Vertex, a: Vertex, b: Vertex },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("cannot identify adjacent vertices {0} and {1}")]
    AdjacentPair(Vertex, Vertex),
    #[error("coloring differs on merged vertices {0} and {1}")]
    InconsistentColoring(Vertex, Vertex),
    #[error("not a separator: {0}")]
    NotASeparator(String),
    #[error("separator is not a clique: {0} and {1} are not adjacent")]
    NotAClique(Vertex, Vertex),
    #[error("the 3-prism with 3 colors has several Kempe classes")]
    ThreePrismExcluded,
    #[error("routing failed: {0}")]
    RoutingFailed(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl KempeError {
    /// True for errors that mean "this method does not apply to the input",
    /// as opposed to a bug or a malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            KempeError::PaletteTooSmall { .. }
                | KempeError::PreconditionViolated(_)
                | KempeError::LayeringFailed { .. }
                | KempeError::TooLarge(_)
                | KempeError::NotChordal { .. }
                | KempeError::ThreePrismExcluded
                | KempeError::RoutingFailed(_)
                | KempeError::BudgetExceeded(_)
                | KempeError::NotASeparator(_)
                | KempeError::NotAClique(..)
        )
    }
}

impl From<std::io::Error> for KempeError {
    fn from(e: std::io::Error) -> Self {
        KempeError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for KempeError {
    fn from(e: serde_json::Error) -> Self {
        KempeError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, KempeError>;
