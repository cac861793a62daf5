use serde::{Deserialize, Serialize};

use crate::error::{KempeError, Result};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingKind {
    Degeneracy,
    Peo,
    LayerRefined,
    Arbitrary,
}

/// A total order `v_1 < ... < v_n` on the vertices. `N+(v)` are the
/// neighbors after `v`, `N-(v)` the neighbors before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrdering {
    order: Vec<Vertex>,
    position: Vec<usize>,
    kind: OrderingKind,
}

impl VertexOrdering {
    pub fn new(order: Vec<Vertex>, kind: OrderingKind) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(KempeError::PreconditionViolated(format!(
                    "ordering is not a permutation of 0..{n}"
                )));
            }
            position[v] = i;
        }
        Ok(VertexOrdering { order, position, kind })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrdering { order: (0..n).collect(), position: (0..n).collect(), kind: OrderingKind::Arbitrary }
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.position[v]
    }

    pub fn vertex_at(&self, i: usize) -> Vertex {
        self.order[i]
    }

    pub fn last(&self) -> Option<Vertex> {
        self.order.last().copied()
    }

    /// `u` strictly before `v`.
    pub fn precedes(&self, u: Vertex, v: Vertex) -> bool {
        self.position[u] < self.position[v]
    }

    pub fn higher_neighbors(&self, g: &Graph, v: Vertex) -> Vec<Vertex> {
        g.neighbors(v).iter().copied().filter(|&w| self.precedes(v, w)).collect()
    }

    pub fn lower_neighbors(&self, g: &Graph, v: Vertex) -> Vec<Vertex> {
        g.neighbors(v).iter().copied().filter(|&w| self.precedes(w, v)).collect()
    }

    pub fn higher_degree(&self, g: &Graph, v: Vertex) -> usize {
        g.neighbors(v).iter().filter(|&&w| self.precedes(v, w)).count()
    }

    pub fn lower_degree(&self, g: &Graph, v: Vertex) -> usize {
        g.neighbors(v).iter().filter(|&&w| self.precedes(w, v)).count()
    }

    /// `max_v |N+(v)|`: the ordering is a d-degeneracy sequence for every d
    /// at least this value.
    pub fn max_higher_degree(&self, g: &Graph) -> usize {
        g.vertices().map(|v| self.higher_degree(g, v)).max().unwrap_or(0)
    }

    /// The same order with vertex `v` moved to the end.
    pub fn with_last(&self, v: Vertex) -> VertexOrdering {
        let mut order: Vec<Vertex> = self.order.iter().copied().filter(|&w| w != v).collect();
        order.push(v);
        VertexOrdering::new(order, self.kind).expect("still a permutation")
    }
}

/// Smallest-degree-first peeling (ties by smallest id). The returned `d` is
/// the degeneracy of `g` and every vertex has at most `d` later neighbors.
pub fn degeneracy_ordering(g: &Graph) -> (VertexOrdering, usize) {
    let n = g.n();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("a vertex remains");
        d = d.max(deg[v]);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    (VertexOrdering::new(order, OrderingKind::Degeneracy).expect("peeling is a permutation"), d)
}

/// Peels vertices of current degree at most `bound`, never removing `last`
/// until it is the only vertex left. Returns the peeling order (with `last`
/// at the end) when it exists.
pub fn peel_with_last(g: &Graph, bound: usize, last: Vertex) -> Option<VertexOrdering> {
    let n = g.n();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n.saturating_sub(1) {
        let v = (0..n).filter(|&v| !removed[v] && v != last && deg[v] <= bound).min_by_key(|&v| (deg[v], v))?;
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            deg[w] -= 1;
        }
    }
    if n > 0 {
        order.push(last);
    }
    VertexOrdering::new(order, OrderingKind::Degeneracy).ok()
}
