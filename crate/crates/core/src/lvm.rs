//! Baseline recoloring for d-degenerate graphs with `k >= d + 1` colors:
//! peel a minimum-degree vertex, recolor the rest recursively, and patch each
//! recursive move with at most one trivial change. The output can be
//! exponentially long; it serves as the reference generator.

use crate::coloring::{ensure_proper, Coloring};
use crate::error::{KempeError, Result};
use crate::graph::Graph;
use crate::kempe::{chain_within, swap_on, KempeMove, MoveSequence};
use crate::ordering::{degeneracy_ordering, VertexOrdering};

pub const PROVENANCE: &str = "lvm";

/// Upper limit on the number of moves before giving up.
pub const DEFAULT_MAX_MOVES: usize = 5_000_000;

pub fn lvm_sequence(g: &Graph, alpha: &Coloring, beta: &Coloring, k: usize) -> Result<MoveSequence> {
    lvm_sequence_capped(g, alpha, beta, k, DEFAULT_MAX_MOVES)
}

pub fn lvm_sequence_capped(
    g: &Graph,
    alpha: &Coloring,
    beta: &Coloring,
    k: usize,
    max_moves: usize,
) -> Result<MoveSequence> {
    let (ord, d) = degeneracy_ordering(g);
    if k < d + 1 {
        return Err(KempeError::PaletteTooSmall { needed: d + 1, k });
    }
    let alpha = alpha.with_palette(k)?;
    let beta = beta.with_palette(k)?;
    ensure_proper(g, &alpha, None)?;
    ensure_proper(g, &beta, None)?;
    let moves = Peeler { g, ord: &ord, max_moves }.solve(0, &alpha, &beta)?;
    Ok(MoveSequence::from_moves(PROVENANCE, moves))
}

struct Peeler<'a> {
    g: &'a Graph,
    ord: &'a VertexOrdering,
    max_moves: usize,
}

impl Peeler<'_> {
    /// Moves in the subgraph induced by positions `>= level`, from `alpha`
    /// to `beta` (both restricted to that subgraph).
    fn solve(&self, level: usize, alpha: &Coloring, beta: &Coloring) -> Result<Vec<KempeMove>> {
        let n = self.g.n();
        if level == n {
            return Ok(Vec::new());
        }
        let sub = self.solve(level + 1, alpha, beta)?;
        let v = self.ord.vertex_at(level);
        let pos = |x| self.ord.position(x);
        let in_sub = |x| pos(x) > level;
        let in_here = |x| pos(x) >= level;

        let mut cur = alpha.clone();
        let mut out = Vec::with_capacity(sub.len() + 1);
        for m in sub {
            let (u, c) = (m.vertex, m.target_color);
            let a = cur.get(u);
            let cv = cur.get(v);
            if cv == a || cv == c {
                let sub_chain = chain_within(self.g, &cur, u, c, in_sub);
                let touches = self.g.neighbors(v).iter().any(|w| sub_chain.binary_search(w).is_ok());
                if touches {
                    let full = chain_within(self.g, &cur, u, c, in_here);
                    let merged = full.iter().filter(|&&x| x != v).count() != sub_chain.len();
                    if merged {
                        let used = cur.used_on(
                            self.g.neighbors(v).iter().copied().filter(|&w| in_here(w)).chain([v]),
                        );
                        let free = (1..=cur.k()).find(|&x| !used[x]).ok_or_else(|| {
                            KempeError::InternalInvariantBroken(format!("no free color at peeled vertex {v}"))
                        })?;
                        out.push(KempeMove::new(v, free));
                        cur.set(v, free);
                    }
                }
            }
            let chain = chain_within(self.g, &cur, u, c, in_here);
            swap_on(&mut cur, &chain, a, c);
            out.push(m);
            if out.len() > self.max_moves {
                return Err(KempeError::TooLarge(format!("more than {} moves", self.max_moves)));
            }
        }
        if cur.get(v) != beta.get(v) {
            let target = beta.get(v);
            if self.g.neighbors(v).iter().any(|&w| in_here(w) && cur.get(w) == target) {
                return Err(KempeError::InternalInvariantBroken(format!(
                    "final change at {v} is not trivial"
                )));
            }
            out.push(KempeMove::new(v, target));
            cur.set(v, target);
        }
        Ok(out)
    }
}
