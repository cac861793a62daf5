//! Kempe-change recoloring: build move sequences between two proper
//! colorings of a graph, replay and verify them, and cross-check small
//! instances against the exhaustive reconfiguration graph.
//!
//! Vertices are `0..n`, colors are `1..=k`. A [`KempeMove`] names a vertex
//! and a target color; its chain is recomputed from the current coloring
//! whenever it is applied.

pub mod coloring;
pub mod degenerate;
pub mod delta;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod io;
pub mod kempe;
pub mod lvm;
pub mod mad;
pub mod oracle;
pub mod ordering;
pub mod small_graphs;
pub mod treewidth;

pub use coloring::{is_proper, Color, Coloring, ListAssignment};
pub use degenerate::{Equalized, RecolorSetting, Recolorer};
pub use delta::{delta_equalize, separator_equalize, DeltaOutcome, DeltaRoute};
pub use error::{KempeError, Result};
pub use graph::{Graph, Vertex};
pub use kempe::{apply_move, kempe_chain, replay, verify_sequence, KempeMove, MoveSequence, SequenceFile};
pub use lvm::lvm_sequence;
pub use mad::{compute_layering, mad_equalize, Layering, MadRecolorer};
pub use ordering::{degeneracy_ordering, OrderingKind, VertexOrdering};
pub use treewidth::{chordal_completion, tw_equalize, ChordalCompletion, TreeDecomposition};
