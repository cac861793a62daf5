//! Targeted recoloring of one vertex with bad-vertex resolution, and the
//! equalization driver built on it.
//!
//! Two settings share the same routine. In degree mode the ordering is a
//! (d-1)-degeneracy sequence in which every vertex but the last has degree at
//! most d, and `k >= d` colors are available. In list mode every vertex but
//! the last satisfies `|L(v)| >= deg(v) + 1`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::coloring::{ensure_proper, Color, Coloring, ListAssignment};
use crate::error::{KempeError, Result};
use crate::graph::{Graph, Vertex};
use crate::kempe::{chain_within, invert_moves, swap_on, KempeMove, MoveSequence};
use crate::ordering::{peel_with_last, VertexOrdering};

pub const PROVENANCE_DEGREE: &str = "alg1-degree";
pub const PROVENANCE_LIST: &str = "alg1-list";
pub const PROVENANCE_EQUALIZE: &str = "prop2-equalize";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecolorSetting {
    Degree { k: usize, d: usize },
    List(ListAssignment),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BadKinds {
    pub blocking: bool,
    pub branching: bool,
    pub problematic: bool,
}

impl BadKinds {
    pub fn any(&self) -> bool {
        self.blocking || self.branching || self.problematic
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadVertexReport {
    pub vertex: Vertex,
    pub kinds: BadKinds,
    pub is_first_bad: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadClassification {
    pub reports: Vec<BadVertexReport>,
    pub greatest_first_bad: Option<Vertex>,
}

/// Counters collected while recoloring.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RecolorTrace {
    /// Loop iterations over all (recursive) calls.
    pub iterations: usize,
    /// Iterations that took the recursive branch.
    pub recursive_branches: usize,
    /// Recursive branches in which `u` had more than one bad neighbor in the chain.
    pub multi_bad_neighbor_branches: usize,
    /// Iterations whose greatest first bad vertex was not smaller than the
    /// previous one within the same call.
    pub non_decreasing_steps: usize,
    pub max_depth: usize,
}

#[derive(Debug, Clone)]
pub struct Equalized {
    pub from_alpha: MoveSequence,
    pub from_beta: MoveSequence,
    pub meeting: Coloring,
    /// `from_alpha` followed by the inverse of `from_beta`: alpha to beta.
    pub combined: MoveSequence,
    /// Colors chosen per equalized vertex for which no color had `p_c <= 1`.
    pub fallback_color_choices: usize,
    pub trace: RecolorTrace,
}

/// Algorithm context: graph, ordering and validated setting.
#[derive(Debug, Clone)]
pub struct Recolorer<'a> {
    g: &'a Graph,
    ord: &'a VertexOrdering,
    setting: RecolorSetting,
    lists: ListAssignment,
}

impl<'a> Recolorer<'a> {
    pub fn new(g: &'a Graph, ord: &'a VertexOrdering, setting: RecolorSetting) -> Result<Self> {
        if ord.len() != g.n() {
            return Err(KempeError::PreconditionViolated("ordering size differs from graph".into()));
        }
        let last = ord.last();
        let lists = match &setting {
            RecolorSetting::Degree { k, d } => {
                if *d == 0 {
                    return Err(KempeError::PreconditionViolated("degree bound must be positive".into()));
                }
                if k < d {
                    return Err(KempeError::PaletteTooSmall { needed: *d, k: *k });
                }
                if let Some(v) = g.vertices().find(|&v| ord.higher_degree(g, v) > d - 1) {
                    return Err(KempeError::PreconditionViolated(format!(
                        "ordering is not a {}-degeneracy sequence at vertex {v}",
                        d - 1
                    )));
                }
                if let Some(v) = g.vertices().find(|&v| Some(v) != last && g.degree(v) > *d) {
                    return Err(KempeError::PreconditionViolated(format!(
                        "vertex {v} has degree {} > {d} and is not last",
                        g.degree(v)
                    )));
                }
                ListAssignment::full(g.n(), *k)
            }
            RecolorSetting::List(lists) => {
                if lists.len() != g.n() {
                    return Err(KempeError::PreconditionViolated("one list per vertex required".into()));
                }
                if let Some(v) = g.vertices().find(|&v| Some(v) != last && lists.list(v).len() < g.degree(v) + 1) {
                    return Err(KempeError::PreconditionViolated(format!(
                        "list of vertex {v} has {} colors, needs {}",
                        lists.list(v).len(),
                        g.degree(v) + 1
                    )));
                }
                lists.clone()
            }
        };
        Ok(Recolorer { g, ord, setting, lists })
    }

    pub fn setting(&self) -> &RecolorSetting {
        &self.setting
    }

    pub fn is_list_mode(&self) -> bool {
        matches!(self.setting, RecolorSetting::List(_))
    }

    fn palette(&self) -> usize {
        match &self.setting {
            RecolorSetting::Degree { k, .. } => *k,
            RecolorSetting::List(l) => l.palette(),
        }
    }

    fn provenance(&self) -> &'static str {
        if self.is_list_mode() {
            PROVENANCE_LIST
        } else {
            PROVENANCE_DEGREE
        }
    }

    fn lists_for_check(&self) -> Option<&ListAssignment> {
        if self.is_list_mode() {
            Some(&self.lists)
        } else {
            None
        }
    }

    fn normalize(&self, col: &Coloring) -> Result<Coloring> {
        let k = self.palette().max(col.k());
        let col = col.with_palette(k)?;
        if col.len() != self.g.n() {
            return Err(KempeError::PreconditionViolated("coloring size differs from graph".into()));
        }
        ensure_proper(self.g, &col, self.lists_for_check())
            .map_err(|e| KempeError::PreconditionViolated(e.to_string()))?;
        Ok(col)
    }

    fn check_target(&self, col: &Coloring, v: Vertex, c: Color) -> Result<()> {
        if v >= self.g.n() {
            return Err(KempeError::VertexOutOfRange(v));
        }
        if !self.lists.contains(v, c) || c > col.k() {
            return Err(KempeError::PreconditionViolated(format!("color {c} not available at {v}")));
        }
        if col.get(v) == c || self.ord.higher_neighbors(self.g, v).iter().any(|&w| col.get(w) == c) {
            return Err(KempeError::PreconditionViolated(format!("color {c} is used in N+[{v}]")));
        }
        Ok(())
    }

    /// Bad vertices of `K_{v,c}(col) \ {v}` and the greatest first bad vertex.
    pub fn classify_bad(&self, col: &Coloring, v: Vertex, c: Color) -> Result<BadClassification> {
        let col = self.normalize(col)?;
        self.check_target(&col, v, c)?;
        Ok(self.classify_unchecked(&col, v, c))
    }

    fn kinds(&self, col: &Coloring, chain: &[Vertex], in_chain: &[bool], v: Vertex, c: Color, u: Vertex) -> BadKinds {
        let a = col.get(v);
        let mut chain_degree = 0;
        let mut greater = 0;
        for &w in self.g.neighbors(u) {
            if in_chain[w] {
                chain_degree += 1;
                if self.ord.precedes(u, w) {
                    greater += 1;
                }
            }
        }
        debug_assert!(chain.binary_search(&u).is_ok());
        BadKinds {
            blocking: self.is_list_mode() && (!self.lists.contains(u, c) || !self.lists.contains(u, a)),
            branching: chain_degree >= 3,
            problematic: greater >= 2,
        }
    }

    fn classify_unchecked(&self, col: &Coloring, v: Vertex, c: Color) -> BadClassification {
        let chain = chain_within(self.g, col, v, c, |_| true);
        let mut in_chain = vec![false; self.g.n()];
        for &x in &chain {
            in_chain[x] = true;
        }
        let mut kinds = vec![BadKinds::default(); self.g.n()];
        for &u in chain.iter().filter(|&&u| u != v) {
            kinds[u] = self.kinds(col, &chain, &in_chain, v, c, u);
        }
        // First bad vertices: reachable from v without passing another bad vertex.
        let mut first = vec![false; self.g.n()];
        let mut seen = vec![false; self.g.n()];
        seen[v] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &y in self.g.neighbors(x) {
                if in_chain[y] && !seen[y] {
                    seen[y] = true;
                    if kinds[y].any() {
                        first[y] = true;
                    } else {
                        queue.push_back(y);
                    }
                }
            }
        }
        let reports: Vec<BadVertexReport> = chain
            .iter()
            .filter(|&&u| u != v && kinds[u].any())
            .map(|&u| BadVertexReport { vertex: u, kinds: kinds[u], is_first_bad: first[u] })
            .collect();
        let greatest_first_bad = reports
            .iter()
            .filter(|r| r.is_first_bad)
            .map(|r| r.vertex)
            .max_by_key(|&u| self.ord.position(u));
        BadClassification { reports, greatest_first_bad }
    }

    /// Recolors `v` with `c`, leaving every vertex after `v` untouched.
    pub fn target_recolor(&self, col: &Coloring, v: Vertex, c: Color) -> Result<(Coloring, MoveSequence)> {
        let (out, seq, _) = self.target_recolor_traced(col, v, c)?;
        Ok((out, seq))
    }

    pub fn target_recolor_traced(
        &self,
        col: &Coloring,
        v: Vertex,
        c: Color,
    ) -> Result<(Coloring, MoveSequence, RecolorTrace)> {
        let mut cur = self.normalize(col)?;
        self.check_target(&cur, v, c)?;
        let mut moves = Vec::new();
        let mut trace = RecolorTrace::default();
        self.recolor(&mut cur, v, c, &mut moves, &mut trace, 0)?;
        Ok((cur, MoveSequence::from_moves(self.provenance(), moves), trace))
    }

    fn smallest_free(&self, col: &Coloring, u: Vertex, around: impl Iterator<Item = Vertex>) -> Option<Color> {
        let used = col.used_on(around.chain([u]));
        self.lists.list(u).iter().copied().find(|&x| x < used.len() && !used[x])
    }

    fn recolor(
        &self,
        cur: &mut Coloring,
        v: Vertex,
        c: Color,
        moves: &mut Vec<KempeMove>,
        trace: &mut RecolorTrace,
        depth: usize,
    ) -> Result<()> {
        trace.max_depth = trace.max_depth.max(depth);
        let mut previous: Option<Vertex> = None;
        let n = self.g.n();
        let cap = 4 * n * n + 16;
        let mut local_iterations = 0usize;
        let above: Vec<(Vertex, Color)> = self
            .g
            .vertices()
            .filter(|&w| self.ord.precedes(v, w))
            .map(|w| (w, cur.get(w)))
            .collect();
        loop {
            let cls = self.classify_unchecked(cur, v, c);
            let Some(u) = cls.greatest_first_bad else {
                if cls.reports.is_empty() {
                    break;
                }
                return Err(KempeError::InternalInvariantBroken(format!(
                    "bad vertices in the chain of {v} but none is first"
                )));
            };
            if let Some(p) = previous {
                if !self.ord.precedes(u, p) {
                    trace.non_decreasing_steps += 1;
                }
            }
            previous = Some(u);
            trace.iterations += 1;
            local_iterations += 1;
            if local_iterations > cap {
                return Err(KempeError::InternalInvariantBroken(format!(
                    "no progress after {cap} iterations while recoloring {v}"
                )));
            }
            if let Some(free) = self.smallest_free(cur, u, self.g.neighbors(u).iter().copied()) {
                moves.push(KempeMove::new(u, free));
                cur.set(u, free);
            } else {
                let higher = self.ord.higher_neighbors(self.g, u);
                let target = self.smallest_free(cur, u, higher.into_iter()).ok_or_else(|| {
                    KempeError::InternalInvariantBroken(format!("no color free in N+[{u}]"))
                })?;
                trace.recursive_branches += 1;
                let bad: Vec<Vertex> = cls.reports.iter().map(|r| r.vertex).collect();
                let bad_neighbors = self.g.neighbors(u).iter().filter(|w| bad.contains(w)).count();
                if bad_neighbors > 1 {
                    trace.multi_bad_neighbor_branches += 1;
                }
                self.recolor(cur, u, target, moves, trace, depth + 1)?;
            }
        }
        let chain = chain_within(self.g, cur, v, c, |_| true);
        let a = cur.get(v);
        swap_on(cur, &chain, a, c);
        moves.push(KempeMove::new(v, c));
        if let Some(&(w, _)) = above.iter().find(|&&(w, x)| cur.get(w) != x) {
            return Err(KempeError::InternalInvariantBroken(format!("recoloring {v} changed the later vertex {w}")));
        }
        Ok(())
    }

    /// Brings `alpha` and `beta` to a common coloring by recoloring, from the
    /// last differing vertex downwards, both sides to a shared color.
    pub fn equalize(&self, alpha: &Coloring, beta: &Coloring) -> Result<Equalized> {
        let mut a = self.normalize(alpha)?;
        let mut b = self.normalize(beta)?;
        let k = a.k().max(b.k());
        a = a.with_palette(k)?;
        b = b.with_palette(k)?;
        let start_b = b.clone();
        let mut moves_a = Vec::new();
        let mut moves_b = Vec::new();
        let mut trace = RecolorTrace::default();
        let mut fallback = 0;
        for i in (0..self.g.n()).rev() {
            let v = self.ord.vertex_at(i);
            if a.get(v) == b.get(v) {
                continue;
            }
            let higher = self.ord.higher_neighbors(self.g, v);
            let lower = self.ord.lower_neighbors(self.g, v);
            let used_above = a.used_on(higher.iter().copied());
            let candidates: Vec<Color> = self.lists.list(v).iter().copied().filter(|&x| x <= k && !used_above[x]).collect();
            let weight = |x: Color| {
                lower.iter().filter(|&&w| a.get(w) == x).count() + lower.iter().filter(|&&w| b.get(w) == x).count()
            };
            let c = match candidates.iter().copied().find(|&x| weight(x) <= 1) {
                Some(x) => x,
                None => {
                    fallback += 1;
                    candidates.iter().copied().min_by_key(|&x| (weight(x), x)).ok_or_else(|| {
                        KempeError::InternalInvariantBroken(format!("no color available at {v}"))
                    })?
                }
            };
            if a.get(v) != c {
                self.recolor(&mut a, v, c, &mut moves_a, &mut trace, 0)?;
            }
            if b.get(v) != c {
                self.recolor(&mut b, v, c, &mut moves_b, &mut trace, 0)?;
            }
        }
        if a != b {
            return Err(KempeError::InternalInvariantBroken("equalized colorings differ".into()));
        }
        let back = invert_moves(self.g, &start_b, &moves_b)?;
        let mut combined = moves_a.clone();
        combined.extend(back);
        Ok(Equalized {
            from_alpha: MoveSequence::from_moves(self.provenance(), moves_a),
            from_beta: MoveSequence::from_moves(self.provenance(), moves_b),
            meeting: a,
            combined: MoveSequence::from_moves(PROVENANCE_EQUALIZE, combined),
            fallback_color_choices: fallback,
            trace,
        })
    }
}

/// An ordering satisfying the degree-mode hypothesis for bound `d`: every
/// vertex has at most `d - 1` later neighbors and all but the last have
/// degree at most `d`.
pub fn degree_bounded_ordering(g: &Graph, d: usize) -> Option<VertexOrdering> {
    if d == 0 {
        return None;
    }
    if g.n() == 0 {
        return Some(VertexOrdering::identity(0));
    }
    let heavy: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) > d).collect();
    let candidates: Vec<Vertex> = match heavy.len() {
        0 => {
            let mut all: Vec<Vertex> = g.vertices().collect();
            all.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
            all
        }
        1 => heavy,
        _ => return None,
    };
    candidates.into_iter().find_map(|last| peel_with_last(g, d - 1, last))
}

/// Smallest `d` for which [`degree_bounded_ordering`] succeeds.
pub fn minimal_degree_bound(g: &Graph) -> (usize, VertexOrdering) {
    (1..=g.n().max(1))
        .find_map(|d| degree_bounded_ordering(g, d).map(|o| (d, o)))
        .expect("d = n always works")
}

/// Identity order, with the single vertex whose list is too short (if any)
/// moved last.
pub fn list_ordering(g: &Graph, lists: &ListAssignment) -> Result<VertexOrdering> {
    let short: Vec<Vertex> = g.vertices().filter(|&v| lists.list(v).len() < g.degree(v) + 1).collect();
    let ord = VertexOrdering::identity(g.n());
    match short.as_slice() {
        [] => Ok(ord),
        [v] => Ok(ord.with_last(*v)),
        _ => Err(KempeError::PreconditionViolated(format!(
            "{} vertices have lists shorter than degree + 1",
            short.len()
        ))),
    }
}
