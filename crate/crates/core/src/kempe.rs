//! Kempe chains, Kempe changes, and replay of move sequences.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::{ensure_proper, first_conflict, Color, Coloring, ListAssignment};
use crate::error::{KempeError, Result};
use crate::graph::{Graph, Vertex};

/// The Kempe change on the chain of `vertex` using `target_color` and the
/// current color of `vertex`. The chain is recomputed when the move is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KempeMove {
    #[serde(rename = "v")]
    pub vertex: Vertex,
    #[serde(rename = "c")]
    pub target_color: Color,
}

impl KempeMove {
    pub fn new(vertex: Vertex, target_color: Color) -> Self {
        KempeMove { vertex, target_color }
    }
}

impl fmt::Display for KempeMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({}, {})", self.vertex, self.target_color)
    }
}

/// Ordered list of moves tagged with the algorithm that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MoveSequence {
    pub moves: Vec<KempeMove>,
    pub provenance: String,
}

impl MoveSequence {
    pub fn new(provenance: impl Into<String>) -> Self {
        MoveSequence { moves: Vec::new(), provenance: provenance.into() }
    }

    pub fn from_moves(provenance: impl Into<String>, moves: Vec<KempeMove>) -> Self {
        MoveSequence { moves, provenance: provenance.into() }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, m: KempeMove) {
        self.moves.push(m);
    }

    pub fn extend(&mut self, other: &MoveSequence) {
        self.moves.extend_from_slice(&other.moves);
    }
}

/// On-disk form of a sequence: start coloring, moves, provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub start: Coloring,
    pub moves: Vec<KempeMove>,
    pub provenance: String,
}

impl SequenceFile {
    pub fn new(start: Coloring, seq: &MoveSequence) -> Self {
        SequenceFile { start, moves: seq.moves.clone(), provenance: seq.provenance.clone() }
    }

    pub fn sequence(&self) -> MoveSequence {
        MoveSequence::from_moves(self.provenance.clone(), self.moves.clone())
    }
}

fn check_move(g: &Graph, col: &Coloring, v: Vertex, c: Color) -> Result<()> {
    if v >= g.n() || v >= col.len() {
        return Err(KempeError::VertexOutOfRange(v));
    }
    if c == 0 || c > col.k() {
        return Err(KempeError::ColorOutOfRange { color: c, k: col.k() });
    }
    if col.get(v) == c {
        return Err(KempeError::DegenerateChain { vertex: v, color: c });
    }
    Ok(())
}

/// Chain of `v` for colors `{col(v), c}` inside the subgraph induced by the
/// vertices accepted by `inside`. `v` itself must be accepted.
pub(crate) fn chain_within(
    g: &Graph,
    col: &Coloring,
    v: Vertex,
    c: Color,
    inside: impl Fn(Vertex) -> bool,
) -> Vec<Vertex> {
    let a = col.get(v);
    let mut seen = vec![false; g.n()];
    seen[v] = true;
    let mut out = vec![v];
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let want = if col.get(x) == a { c } else { a };
        for &y in g.neighbors(x) {
            if !seen[y] && col.get(y) == want && inside(y) {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// The Kempe chain `K_{v,c}`: the connected component containing `v` of the
/// subgraph induced by colors `c` and `col(v)`. Sorted by vertex id.
pub fn kempe_chain(g: &Graph, col: &Coloring, v: Vertex, c: Color) -> Result<Vec<Vertex>> {
    check_move(g, col, v, c)?;
    Ok(chain_within(g, col, v, c, |_| true))
}

/// Swaps colors `a` and `b` on `chain`.
pub(crate) fn swap_on(col: &mut Coloring, chain: &[Vertex], a: Color, b: Color) {
    for &x in chain {
        let y = col.get(x);
        col.set(x, if y == a { b } else if y == b { a } else { y });
    }
}

/// Applies `m` to `col` and returns the chain that was swapped.
pub fn apply_move_in_place(g: &Graph, col: &mut Coloring, m: KempeMove) -> Result<Vec<Vertex>> {
    let chain = kempe_chain(g, col, m.vertex, m.target_color)?;
    let a = col.get(m.vertex);
    swap_on(col, &chain, a, m.target_color);
    Ok(chain)
}

/// Performs the Kempe change `m` and returns the new coloring.
pub fn apply_move(g: &Graph, col: &Coloring, m: KempeMove) -> Result<Coloring> {
    let mut out = col.clone();
    apply_move_in_place(g, &mut out, m)?;
    Ok(out)
}

/// Applies every move in order without properness checks.
pub fn replay(g: &Graph, start: &Coloring, moves: &[KempeMove]) -> Result<Coloring> {
    let mut col = start.clone();
    for (index, &m) in moves.iter().enumerate() {
        apply_move_in_place(g, &mut col, m)
            .map_err(|e| KempeError::InvalidMove { index, reason: e.to_string() })?;
    }
    Ok(col)
}

/// Replays `seq` from a proper `start`, checking that every intermediate
/// coloring is proper (and on-list when `lists` is given). Returns the final
/// coloring.
pub fn verify_sequence(
    g: &Graph,
    start: &Coloring,
    seq: &MoveSequence,
    lists: Option<&ListAssignment>,
) -> Result<Coloring> {
    ensure_proper(g, start, lists)?;
    let mut col = start.clone();
    for (index, &m) in seq.moves.iter().enumerate() {
        apply_move_in_place(g, &mut col, m)
            .map_err(|e| KempeError::InvalidMove { index, reason: e.to_string() })?;
        if first_conflict(g, &col, lists).is_some() {
            return Err(KempeError::ImproperIntermediate { index });
        }
    }
    Ok(col)
}

/// Moves that lead from the end of `moves` (replayed from `start`) back to
/// `start`. Each Kempe change is undone by the change on the same chain with
/// the vertex's previous color.
pub fn invert_moves(g: &Graph, start: &Coloring, moves: &[KempeMove]) -> Result<Vec<KempeMove>> {
    let mut col = start.clone();
    let mut inverse = Vec::with_capacity(moves.len());
    for (index, &m) in moves.iter().enumerate() {
        let previous = col.get(m.vertex);
        apply_move_in_place(g, &mut col, m)
            .map_err(|e| KempeError::InvalidMove { index, reason: e.to_string() })?;
        inverse.push(KempeMove::new(m.vertex, previous));
    }
    inverse.reverse();
    Ok(inverse)
}

/// Moves that realise swapping colors `a` and `b` on every chain contained in
/// `set`, one move per connected component (ordered by smallest vertex).
/// `set` must be a union of `{a, b}`-chains.
pub(crate) fn moves_for_union(g: &Graph, col: &Coloring, set: &[Vertex], a: Color, b: Color) -> Vec<KempeMove> {
    g.components_within(set)
        .into_iter()
        .map(|comp| {
            let x = comp[0];
            KempeMove::new(x, if col.get(x) == a { b } else { a })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn col(k: usize, c: &[Color]) -> Coloring {
        Coloring::new(k, c.to_vec()).unwrap()
    }

    #[test]
    fn chain_examples() {
        let k3 = fixtures::k3();
        assert_eq!(kempe_chain(&k3, &col(3, &[1, 2, 3]), 0, 2).unwrap(), vec![0, 1]);
        let p4 = fixtures::path(4);
        assert_eq!(kempe_chain(&p4, &col(2, &[1, 2, 1, 2]), 0, 2).unwrap(), vec![0, 1, 2, 3]);
        let prism = fixtures::prism();
        let frozen = fixtures::prism_frozen_left();
        for v in prism.vertices() {
            for c in 1..=3 {
                if c != frozen.get(v) {
                    assert_eq!(kempe_chain(&prism, &frozen, v, c).unwrap().len(), 4);
                }
            }
        }
    }

    #[test]
    fn chain_errors() {
        let k3 = fixtures::k3();
        let c = col(3, &[1, 2, 3]);
        assert!(matches!(kempe_chain(&k3, &c, 0, 1), Err(KempeError::DegenerateChain { .. })));
        assert!(matches!(kempe_chain(&k3, &c, 0, 4), Err(KempeError::ColorOutOfRange { .. })));
    }

    #[test]
    fn apply_examples() {
        let k3 = fixtures::k3();
        let start = col(3, &[1, 2, 3]);
        let next = apply_move(&k3, &start, KempeMove::new(0, 2)).unwrap();
        assert_eq!(next.colors(), &[2, 1, 3]);
        let back = apply_move(&k3, &next, KempeMove::new(0, 1)).unwrap();
        assert_eq!(back, start);

        let prism = fixtures::prism();
        let frozen = fixtures::prism_frozen_left();
        let moved = apply_move(&prism, &frozen, KempeMove::new(0, 1)).unwrap();
        assert_eq!(moved.partition(), frozen.partition());
    }

    #[test]
    fn verify_examples() {
        let k3 = fixtures::k3();
        let start = col(3, &[1, 2, 3]);
        let empty = MoveSequence::new("t");
        assert_eq!(verify_sequence(&k3, &start, &empty, None).unwrap(), start);

        let seq = MoveSequence::from_moves("t", vec![KempeMove::new(0, 2), KempeMove::new(2, 1)]);
        let expected = replay(&k3, &start, &seq.moves).unwrap();
        assert_eq!(verify_sequence(&k3, &start, &seq, None).unwrap(), expected);
        assert_eq!(expected.colors(), &[2, 3, 1]);

        let bad = MoveSequence::from_moves("t", vec![KempeMove::new(0, 2), KempeMove::new(0, 2)]);
        assert!(matches!(
            verify_sequence(&k3, &start, &bad, None),
            Err(KempeError::InvalidMove { index: 1, .. })
        ));
    }

    #[test]
    fn verify_flags_off_list() {
        let p2 = fixtures::path(2);
        let lists = ListAssignment::new(vec![vec![1, 2], vec![2, 3]]).unwrap();
        let start = col(3, &[1, 2]);
        let seq = MoveSequence::from_moves("t", vec![KempeMove::new(0, 2)]);
        assert!(matches!(
            verify_sequence(&p2, &start, &seq, Some(&lists)),
            Err(KempeError::ImproperIntermediate { index: 0 })
        ));
    }

    #[test]
    fn inverse_restores_start() {
        let p4 = fixtures::path(4);
        let start = col(3, &[1, 2, 1, 2]);
        let moves = vec![KempeMove::new(0, 3), KempeMove::new(1, 1), KempeMove::new(3, 3)];
        let end = replay(&p4, &start, &moves).unwrap();
        let inv = invert_moves(&p4, &start, &moves).unwrap();
        assert_eq!(replay(&p4, &end, &inv).unwrap(), start);
    }
}
