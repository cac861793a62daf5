//! Layered recoloring for graphs of bounded maximum average degree.
//!
//! A layering `V_1, ..., V_t` of degree `k-1` gives every vertex at most
//! `k-1` neighbors in `G_i = G[V_i ∪ ... ∪ V_t]`, `i` its level. Vertices are
//! totally ordered by (level, id). Layers are recolored from the top down;
//! each layer-level Kempe change is lifted to `G` after freeing lower levels.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::coloring::{ensure_proper, Color, Coloring, ListAssignment};
use crate::degenerate::{RecolorSetting, Recolorer};
use crate::error::{KempeError, Result};
use crate::graph::{Graph, Vertex};
use crate::kempe::{chain_within, swap_on, KempeMove, MoveSequence};
use crate::ordering::{OrderingKind, VertexOrdering};

pub const PROVENANCE: &str = "mad";

/// Largest `n` for which [`mad_oracle`] runs.
pub const MAD_ORACLE_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayeringRepr", into = "LayeringRepr")]
pub struct Layering {
    layers: Vec<Vec<Vertex>>,
    level: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LayeringRepr {
    layers: Vec<Vec<Vertex>>,
}

impl TryFrom<LayeringRepr> for Layering {
    type Error = KempeError;
    fn try_from(r: LayeringRepr) -> Result<Self> {
        let n = r.layers.iter().map(Vec::len).sum();
        Layering::new(n, r.layers)
    }
}

impl From<Layering> for LayeringRepr {
    fn from(l: Layering) -> Self {
        LayeringRepr { layers: l.layers }
    }
}

impl Layering {
    /// Layers are listed from `V_1` upwards and must partition `0..n`.
    pub fn new(n: usize, layers: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut level = vec![0; n];
        for (i, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(KempeError::PreconditionViolated(format!("layer {} is empty", i + 1)));
            }
            for &v in layer {
                if v >= n || level[v] != 0 {
                    return Err(KempeError::PreconditionViolated("layers do not partition the vertices".into()));
                }
                level[v] = i + 1;
            }
        }
        if level.contains(&0) {
            return Err(KempeError::PreconditionViolated("layers do not cover the vertices".into()));
        }
        let layers = layers
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l
            })
            .collect();
        Ok(Layering { layers, level })
    }

    pub fn t(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<Vertex>] {
        &self.layers
    }

    /// Vertices of level `i` (1-based).
    pub fn layer(&self, i: usize) -> &[Vertex] {
        &self.layers[i - 1]
    }

    pub fn level(&self, v: Vertex) -> usize {
        self.level[v]
    }

    /// Vertices ordered by (level, id).
    pub fn ordering(&self) -> VertexOrdering {
        let order = self.layers.iter().flatten().copied().collect();
        VertexOrdering::new(order, OrderingKind::LayerRefined).expect("layers partition the vertices")
    }

    /// Checks that every vertex has at most `k - 1` neighbors of level at least its own.
    pub fn validate(&self, g: &Graph, k: usize) -> Result<()> {
        if self.level.len() != g.n() {
            return Err(KempeError::PreconditionViolated("layering size differs from graph".into()));
        }
        for v in g.vertices() {
            let up = g.neighbors(v).iter().filter(|&&w| self.level[w] >= self.level[v]).count();
            if up + 1 > k {
                return Err(KempeError::PreconditionViolated(format!(
                    "vertex {v} has {up} neighbors in its own level or above, more than {}",
                    k.saturating_sub(1)
                )));
            }
        }
        Ok(())
    }
}

/// Exact maximum average degree, by exhaustive search over induced subgraphs.
pub fn mad_oracle(g: &Graph) -> Result<Ratio<i64>> {
    let n = g.n();
    if n > MAD_ORACLE_MAX_N {
        return Err(KempeError::TooLarge(format!("mad oracle limited to {MAD_ORACLE_MAX_N} vertices, got {n}")));
    }
    if n == 0 {
        return Ok(Ratio::from_integer(0));
    }
    let masks: Vec<u32> = g.vertices().map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w))).collect();
    let mut best = Ratio::from_integer(0);
    for set in 1u32..(1u32 << n) {
        let twice_edges: u32 = (0..n).filter(|&v| set >> v & 1 == 1).map(|v| (masks[v] & set).count_ones()).sum();
        let avg = Ratio::new(i64::from(twice_edges), i64::from(set.count_ones()));
        if avg > best {
            best = avg;
        }
    }
    Ok(best)
}

/// Peels, round by round, every vertex of residual degree at most `k - 1`.
/// When `g` is small enough the hypothesis `mad(g) <= k - epsilon` is
/// checked exactly; otherwise it is only logged.
pub fn compute_layering(g: &Graph, k: usize, epsilon: f64) -> Result<Layering> {
    if k == 0 {
        return Err(KempeError::PreconditionViolated("k must be positive".into()));
    }
    if g.n() <= MAD_ORACLE_MAX_N {
        let eps = Ratio::<i64>::approximate_float(epsilon)
            .ok_or_else(|| KempeError::PreconditionViolated(format!("bad epsilon {epsilon}")))?;
        let mad = mad_oracle(g)?;
        if mad > Ratio::from_integer(k as i64) - eps {
            return Err(KempeError::PreconditionViolated(format!("mad = {mad} exceeds {k} - {epsilon}")));
        }
    } else {
        log::warn!("mad hypothesis not checked for n = {}", g.n());
    }
    let n = g.n();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut left = n;
    let mut layers = Vec::new();
    while left > 0 {
        let layer: Vec<Vertex> = (0..n).filter(|&v| !removed[v] && deg[v] < k).collect();
        if layer.is_empty() {
            return Err(KempeError::LayeringFailed { residual: left, k });
        }
        for &v in &layer {
            removed[v] = true;
            for &w in g.neighbors(v) {
                deg[w] -= 1;
            }
        }
        left -= layer.len();
        layers.push(layer);
    }
    let layering = Layering::new(n, layers)?;
    layering.validate(g, k)?;
    Ok(layering)
}

/// A level-decreasing sequence of vertices, the recursion stack of a freeing call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CallSequence {
    pub vertices: Vec<Vertex>,
}

impl CallSequence {
    pub fn single(v: Vertex) -> Self {
        CallSequence { vertices: vec![v] }
    }

    pub fn last(&self) -> Option<Vertex> {
        self.vertices.last().copied()
    }

    pub fn push(&self, u: Vertex) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.push(u);
        CallSequence { vertices }
    }

    pub fn is_level_decreasing(&self, layering: &Layering) -> bool {
        self.vertices.windows(2).all(|w| layering.level(w[0]) > layering.level(w[1]))
    }

    /// Lexicographic order in which a proper extension is smaller and the
    /// empty sequence is the largest element.
    pub fn lex_less(&self, other: &CallSequence, ord: &VertexOrdering) -> bool {
        for (a, b) in self.vertices.iter().zip(&other.vertices) {
            if a != b {
                return ord.precedes(*a, *b);
            }
        }
        self.vertices.len() > other.vertices.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MadProblematicReport {
    pub vertex: Vertex,
    /// Level-decreasing path from `v` to `vertex` inside the chain.
    pub path: Vec<Vertex>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MadStats {
    pub free_calls: usize,
    /// Moves made by the costliest top-level freeing call.
    pub max_free_moves: usize,
    pub lift_calls: usize,
    /// Moves made by the costliest lift.
    pub max_lift_moves: usize,
    /// Layer-level moves produced by the list equalizer, summed over layers.
    pub layer_moves: usize,
}

#[derive(Debug, Clone)]
pub struct MadOutcome {
    pub sequence: MoveSequence,
    pub layering: Layering,
    pub stats: MadStats,
}

#[derive(Debug, Clone)]
pub struct MadRecolorer<'a> {
    g: &'a Graph,
    layering: Layering,
    ord: VertexOrdering,
    k: usize,
}

impl<'a> MadRecolorer<'a> {
    pub fn new(g: &'a Graph, layering: Layering, k: usize) -> Result<Self> {
        layering.validate(g, k)?;
        let ord = layering.ordering();
        Ok(MadRecolorer { g, layering, ord, k })
    }

    pub fn layering(&self) -> &Layering {
        &self.layering
    }

    pub fn ordering(&self) -> &VertexOrdering {
        &self.ord
    }

    fn check_coloring(&self, col: &Coloring) -> Result<Coloring> {
        if col.len() != self.g.n() {
            return Err(KempeError::PreconditionViolated("coloring size differs from graph".into()));
        }
        let col = col.with_palette(self.k)?;
        ensure_proper(self.g, &col, None).map_err(|e| KempeError::PreconditionViolated(e.to_string()))?;
        Ok(col)
    }

    /// Problematic vertices for `(v, c)`, sorted by the layer order.
    pub fn problematic(&self, col: &Coloring, v: Vertex, c: Color) -> Vec<MadProblematicReport> {
        let chain = chain_within(self.g, col, v, c, |_| true);
        let n = self.g.n();
        let mut in_chain = vec![false; n];
        for &x in &chain {
            in_chain[x] = true;
        }
        let level = |x: Vertex| self.layering.level(x);
        let mut parent = vec![usize::MAX; n];
        let mut reached = vec![false; n];
        reached[v] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &y in self.g.neighbors(x) {
                if in_chain[y] && !reached[y] && level(y) < level(x) {
                    reached[y] = true;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<MadProblematicReport> = chain
            .iter()
            .copied()
            .filter(|&u| u != v && reached[u])
            .filter(|&u| self.g.neighbors(u).iter().filter(|&&w| in_chain[w] && level(w) >= level(u)).count() >= 2)
            .map(|u| {
                let mut path = vec![u];
                let mut x = u;
                while x != v {
                    x = parent[x];
                    path.push(x);
                }
                path.reverse();
                MadProblematicReport { vertex: u, path }
            })
            .collect();
        out.sort_by_key(|r| self.ord.position(r.vertex));
        out
    }

    fn largest_problematic(&self, col: &Coloring, v: Vertex, c: Color) -> Option<Vertex> {
        self.problematic(col, v, c).last().map(|r| r.vertex)
    }

    /// Recolors vertices below `v`'s level until `(v, c)` has no problematic
    /// vertex. `s` ends with `v`.
    pub fn free_vertex(&self, col: &Coloring, s: &CallSequence, c: Color) -> Result<(Coloring, MoveSequence)> {
        let mut cur = self.check_coloring(col)?;
        let v = s.last().ok_or_else(|| KempeError::PreconditionViolated("empty call sequence".into()))?;
        if v >= self.g.n() {
            return Err(KempeError::VertexOutOfRange(v));
        }
        if !s.is_level_decreasing(&self.layering) {
            return Err(KempeError::PreconditionViolated("call sequence is not level-decreasing".into()));
        }
        if c == 0 || c > self.k || c == cur.get(v) {
            return Err(KempeError::PreconditionViolated(format!("color {c} cannot be freed at {v}")));
        }
        let mut moves = Vec::new();
        let mut log = Vec::new();
        self.free(&mut cur, s, c, &mut moves, &mut log)?;
        Ok((cur, MoveSequence::from_moves(PROVENANCE, moves)))
    }

    fn free(
        &self,
        cur: &mut Coloring,
        s: &CallSequence,
        c: Color,
        moves: &mut Vec<KempeMove>,
        log: &mut Vec<CallSequence>,
    ) -> Result<()> {
        if let Some(prev) = log.last() {
            if !s.lex_less(prev, &self.ord) {
                return Err(KempeError::InternalInvariantBroken(format!(
                    "call sequence {:?} does not decrease after {:?}",
                    s.vertices, prev.vertices
                )));
            }
        }
        log.push(s.clone());
        let v = s.last().expect("nonempty");
        while let Some(u) = self.largest_problematic(cur, v, c) {
            let lu = self.layering.level(u);
            let around: Vec<Vertex> =
                self.g.neighbors(u).iter().copied().filter(|&w| self.layering.level(w) >= lu).collect();
            let used = cur.used_on(around.iter().copied().chain([u]));
            let cu = (1..=self.k).find(|&x| !used[x]).ok_or_else(|| {
                KempeError::InternalInvariantBroken(format!("no free color at problematic vertex {u}"))
            })?;
            self.free(cur, &s.push(u), cu, moves, log)?;
            let chain = chain_within(self.g, cur, u, cu, |_| true);
            if let Some(&w) = chain.iter().find(|&&w| w != u && self.layering.level(w) >= lu) {
                return Err(KempeError::InternalInvariantBroken(format!(
                    "freeing change at {u} reaches {w} on its own level or above"
                )));
            }
            let a = cur.get(u);
            swap_on(cur, &chain, a, cu);
            moves.push(KempeMove::new(u, cu));
        }
        Ok(())
    }

    /// Performs in `G` the Kempe change of `G[V_i]` on the chain
    /// `K_{x,other}` where `x` is the smallest vertex of `chain`.
    pub fn lift_chain_change(
        &self,
        col: &Coloring,
        i: usize,
        chain: &[Vertex],
        other: Color,
    ) -> Result<(Coloring, MoveSequence)> {
        let mut cur = self.check_coloring(col)?;
        let mut stats = MadStats::default();
        let moves = self.lift(&mut cur, i, chain, other, &mut stats)?;
        Ok((cur, MoveSequence::from_moves(PROVENANCE, moves)))
    }

    fn lift(
        &self,
        cur: &mut Coloring,
        i: usize,
        chain: &[Vertex],
        other: Color,
        stats: &mut MadStats,
    ) -> Result<Vec<KempeMove>> {
        if i == 0 || i > self.layering.t() {
            return Err(KempeError::PreconditionViolated(format!("no layer {i}")));
        }
        let mut sorted = chain.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let x = *sorted.first().ok_or_else(|| KempeError::NotAChain("empty chain".into()))?;
        if other == 0 || other > self.k || other == cur.get(x) {
            return Err(KempeError::NotAChain(format!("color {other} does not form a chain with vertex {x}")));
        }
        let level = |w: Vertex| self.layering.level(w);
        if chain_within(self.g, cur, x, other, |w| level(w) == i) != sorted {
            return Err(KempeError::NotAChain(format!("not a bichromatic component of layer {i}")));
        }
        let (c1, c2) = (cur.get(x), other);
        stats.lift_calls += 1;
        let mut moves = Vec::new();
        let mut previous: Option<Vertex> = None;
        loop {
            let mut best: Option<(Vertex, Vertex, Color)> = None;
            for &v in &sorted {
                let cv = if cur.get(v) == c1 { c2 } else { c1 };
                if let Some(u) = self.largest_problematic(cur, v, cv) {
                    if best.map_or(true, |(b, _, _)| self.ord.precedes(b, u)) {
                        best = Some((u, v, cv));
                    }
                }
            }
            let Some((u, v, cv)) = best else { break };
            if let Some(p) = previous {
                if !self.ord.precedes(u, p) {
                    return Err(KempeError::InternalInvariantBroken(format!(
                        "largest problematic vertex did not decrease ({p} then {u})"
                    )));
                }
            }
            previous = Some(u);
            let before = moves.len();
            let mut log = Vec::new();
            self.free(cur, &CallSequence::single(v), cv, &mut moves, &mut log)?;
            stats.free_calls += 1;
            stats.max_free_moves = stats.max_free_moves.max(moves.len() - before);
        }
        if chain_within(self.g, cur, x, other, |w| level(w) >= i) != sorted {
            return Err(KempeError::InternalInvariantBroken(format!(
                "layer-{i} chain at {x} is not a chain of the upper graph"
            )));
        }
        let full = chain_within(self.g, cur, x, other, |_| true);
        if full.iter().filter(|&&w| level(w) >= i).count() != sorted.len() {
            return Err(KempeError::InternalInvariantBroken(format!(
                "lifted change at {x} escapes through lower levels"
            )));
        }
        let a = cur.get(x);
        swap_on(cur, &full, a, other);
        moves.push(KempeMove::new(x, other));
        stats.max_lift_moves = stats.max_lift_moves.max(moves.len());
        Ok(moves)
    }

    /// Recolors `alpha` into `beta` layer by layer from the top.
    pub fn equalize(&self, alpha: &Coloring, beta: &Coloring) -> Result<MadOutcome> {
        let mut cur = self.check_coloring(alpha)?;
        let beta = self.check_coloring(beta)?;
        let mut stats = MadStats::default();
        let mut moves = Vec::new();
        for i in (1..=self.layering.t()).rev() {
            let layer = self.layering.layer(i).to_vec();
            let (sub, map) = self.g.induced_subgraph(&layer);
            let lists: Vec<Vec<Color>> = map
                .iter()
                .map(|&v| {
                    let used = cur.used_on(self.g.neighbors(v).iter().copied().filter(|&w| self.layering.level(w) > i));
                    (1..=self.k).filter(|&x| !used[x]).collect()
                })
                .collect();
            for (j, l) in lists.iter().enumerate() {
                if l.len() < sub.degree(j) + 1 {
                    return Err(KempeError::InternalInvariantBroken(format!(
                        "residual list of vertex {} too small",
                        map[j]
                    )));
                }
            }
            let lists = ListAssignment::new(lists)?;
            let ord = VertexOrdering::identity(sub.n());
            let rec = Recolorer::new(&sub, &ord, RecolorSetting::List(lists))?;
            let eq = rec.equalize(&cur.restrict(&map), &beta.restrict(&map))?;
            stats.layer_moves += eq.combined.len();
            let mut local = cur.restrict(&map);
            for m in &eq.combined.moves {
                let chain: Vec<Vertex> = chain_within(&sub, &local, m.vertex, m.target_color, |_| true);
                let a = local.get(m.vertex);
                swap_on(&mut local, &chain, a, m.target_color);
                let global: Vec<Vertex> = chain.iter().map(|&j| map[j]).collect();
                let lowest = *global.iter().min().expect("chain contains the move vertex");
                let other = if cur.get(lowest) == a { m.target_color } else { a };
                let lifted = self.lift(&mut cur, i, &global, other, &mut stats)?;
                moves.extend(lifted);
            }
            if cur.restrict(&map) != beta.restrict(&map) {
                return Err(KempeError::InternalInvariantBroken(format!("layer {i} not equalized")));
            }
        }
        Ok(MadOutcome { sequence: MoveSequence::from_moves(PROVENANCE, moves), layering: self.layering.clone(), stats })
    }
}

pub fn mad_equalize(g: &Graph, k: usize, epsilon: f64, alpha: &Coloring, beta: &Coloring) -> Result<MadOutcome> {
    let layering = compute_layering(g, k, epsilon)?;
    MadRecolorer::new(g, layering, k)?.equalize(alpha, beta)
}

/// Number of level-decreasing paths from `u` down to `w`.
pub fn count_level_decreasing_paths(g: &Graph, layering: &Layering, u: Vertex, w: Vertex) -> u64 {
    if u == w {
        return 1;
    }
    g.neighbors(u)
        .iter()
        .filter(|&&x| layering.level(x) < layering.level(u) && layering.level(x) >= layering.level(w))
        .map(|&x| count_level_decreasing_paths(g, layering, x, w))
        .sum()
}
