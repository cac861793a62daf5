//! Bounded-degree machinery: identifying non-adjacent vertices, lifting
//! quotient moves, routing across a clique separator, and the driver for
//! `k >= Δ`.

use serde::Serialize;

use crate::coloring::{ensure_proper, Color, Coloring};
use crate::degenerate::{degree_bounded_ordering, RecolorSetting, Recolorer};
use crate::error::{KempeError, Result};
use crate::graph::{Graph, Vertex};
use crate::kempe::{apply_move_in_place, kempe_chain, moves_for_union, KempeMove, MoveSequence};
use crate::ordering::degeneracy_ordering;

pub const PROVENANCE: &str = "delta";
pub const PROVENANCE_SEPARATOR: &str = "separator";

/// Steps allowed to the backtracking search for a coloring of a double identification.
pub const COLORING_SEARCH_BUDGET: usize = 200_000;

/// Nodes the oracle fallback may visit.
pub const FALLBACK_NODE_BUDGET: usize = 500_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EligiblePair {
    pub center: Vertex,
    pub pair: (Vertex, Vertex),
}

/// Unordered pairs of non-adjacent neighbors of `u`, sorted.
pub fn eligible_pairs(g: &Graph, u: Vertex) -> Vec<EligiblePair> {
    let nb = g.neighbors(u);
    let mut out = Vec::new();
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !g.has_edge(a, b) {
                out.push(EligiblePair { center: u, pair: (a, b) });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identification {
    pub base: Graph,
    pub merged_pairs: Vec<(Vertex, Vertex)>,
    pub quotient: Graph,
    /// Base vertex to quotient vertex; classes are numbered by smallest member.
    pub vertex_map: Vec<Vertex>,
}

pub fn identify(g: &Graph, v: Vertex, w: Vertex) -> Result<Identification> {
    identify_pairs(g, &[(v, w)])
}

/// Merges every pair (transitively); each resulting class must be independent.
pub fn identify_pairs(g: &Graph, pairs: &[(Vertex, Vertex)]) -> Result<Identification> {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for &(v, w) in pairs {
        if v >= n || w >= n {
            return Err(KempeError::VertexOutOfRange(v.max(w)));
        }
        if v == w || g.has_edge(v, w) {
            return Err(KempeError::AdjacentPair(v, w));
        }
        let (a, b) = (find(&mut parent, v), find(&mut parent, w));
        parent[a.max(b)] = a.min(b);
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let mut index = vec![usize::MAX; n];
    let mut count = 0;
    let mut vertex_map = vec![0; n];
    for x in 0..n {
        let r = roots[x];
        if index[r] == usize::MAX {
            index[r] = count;
            count += 1;
        }
        vertex_map[x] = index[r];
    }
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        let (a, b) = (vertex_map[u], vertex_map[v]);
        if a == b {
            return Err(KempeError::AdjacentPair(u, v));
        }
        edges.push((a, b));
    }
    let quotient = Graph::from_edges_dedup(count, edges)?;
    Ok(Identification { base: g.clone(), merged_pairs: pairs.to_vec(), quotient, vertex_map })
}

impl Identification {
    pub fn preimage(&self, q: Vertex) -> Vec<Vertex> {
        self.base.vertices().filter(|&x| self.vertex_map[x] == q).collect()
    }

    /// The quotient coloring of a base coloring constant on merged classes.
    pub fn project(&self, col: &Coloring) -> Result<Coloring> {
        let mut colors = vec![0; self.quotient.n()];
        let mut rep = vec![usize::MAX; self.quotient.n()];
        for x in self.base.vertices() {
            let q = self.vertex_map[x];
            if rep[q] == usize::MAX {
                rep[q] = x;
                colors[q] = col.get(x);
            } else if colors[q] != col.get(x) {
                return Err(KempeError::InconsistentColoring(rep[q], x));
            }
        }
        Coloring::new(col.k(), colors)
    }

    pub fn lift_coloring(&self, qcol: &Coloring) -> Coloring {
        let colors = self.base.vertices().map(|x| qcol.get(self.vertex_map[x])).collect();
        Coloring::new(qcol.k(), colors).expect("same palette")
    }
}

/// The base moves realising `quotient_move`: one per base component of the
/// preimage of the quotient chain.
pub fn lift_quotient_move(id: &Identification, base_col: &Coloring, quotient_move: KempeMove) -> Result<MoveSequence> {
    let qcol = id.project(base_col)?;
    let chain = kempe_chain(&id.quotient, &qcol, quotient_move.vertex, quotient_move.target_color)?;
    let mut inside = vec![false; id.quotient.n()];
    for &q in &chain {
        inside[q] = true;
    }
    let preimage: Vec<Vertex> = id.base.vertices().filter(|&x| inside[id.vertex_map[x]]).collect();
    let a = qcol.get(quotient_move.vertex);
    Ok(MoveSequence::from_moves(PROVENANCE, moves_for_union(&id.base, base_col, &preimage, a, quotient_move.target_color)))
}

fn degree_mode_moves(g: &Graph, k: usize, from: &Coloring, to: &Coloring) -> Result<Vec<KempeMove>> {
    let ord = degree_bounded_ordering(g, k).ok_or_else(|| {
        KempeError::PreconditionViolated(format!("no ordering with bounded degree {k} and degeneracy {}", k - 1))
    })?;
    let rec = Recolorer::new(g, &ord, RecolorSetting::Degree { k, d: k })?;
    Ok(rec.equalize(from, to)?.combined.moves)
}

/// Routes `alpha` to `beta` across the clique separator `V1 ∩ V2` of `g`:
/// recolor `G[V1]` while permuting `G[V2]`, then the converse, then undo the
/// remaining color permutation on `V1 \ S`.
pub fn separator_equalize(
    g: &Graph,
    v1: &[Vertex],
    v2: &[Vertex],
    k: usize,
    alpha: &Coloring,
    beta: &Coloring,
) -> Result<MoveSequence> {
    let n = g.n();
    let mut side = vec![0u8; n];
    for &x in v1 {
        if x >= n {
            return Err(KempeError::VertexOutOfRange(x));
        }
        side[x] |= 1;
    }
    for &x in v2 {
        if x >= n {
            return Err(KempeError::VertexOutOfRange(x));
        }
        side[x] |= 2;
    }
    if let Some(x) = (0..n).find(|&x| side[x] == 0) {
        return Err(KempeError::NotASeparator(format!("vertex {x} is on neither side")));
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| side[u] | side[v] == 3 && side[u] != 3 && side[v] != 3) {
        return Err(KempeError::NotASeparator(format!("edge {u}-{v} crosses the separator")));
    }
    let s: Vec<Vertex> = (0..n).filter(|&x| side[x] == 3).collect();
    for (i, &a) in s.iter().enumerate() {
        if let Some(&b) = s[i + 1..].iter().find(|&&b| !g.has_edge(a, b)) {
            return Err(KempeError::NotAClique(a, b));
        }
    }
    let mut cur = alpha.with_palette(k)?;
    let beta = beta.with_palette(k)?;
    ensure_proper(g, &cur, None)?;
    ensure_proper(g, &beta, None)?;
    let mut moves = Vec::new();
    let mut sets: Vec<Vec<Vertex>> = vec![v1.to_vec(), v2.to_vec()];
    for set in &mut sets {
        set.sort_unstable();
        set.dedup();
    }
    for phase in 0..2 {
        let (here, there) = (&sets[phase], &sets[1 - phase]);
        let (sub, map) = g.induced_subgraph(here);
        let local = degree_mode_moves(&sub, k, &cur.restrict(&map), &beta.restrict(&map))?;
        let mut local_col = cur.restrict(&map);
        for m in local {
            let a = local_col.get(m.vertex);
            let c = m.target_color;
            let chain: Vec<Vertex> = apply_move_in_place(&sub, &mut local_col, m)?.iter().map(|&j| map[j]).collect();
            let mut union = chain.clone();
            if chain.iter().any(|&x| side[x] == 3) {
                union.extend(there.iter().copied().filter(|&x| side[x] != 3 && (cur.get(x) == a || cur.get(x) == c)));
            }
            for gm in moves_for_union(g, &cur, &union, a, c) {
                apply_move_in_place(g, &mut cur, gm)?;
                moves.push(gm);
            }
        }
        if cur.restrict(&map) != beta.restrict(&map) {
            return Err(KempeError::InternalInvariantBroken(format!("side {} not equalized", phase + 1)));
        }
    }
    let only_v1: Vec<Vertex> = (0..n).filter(|&x| side[x] == 1).collect();
    while let Some(&x) = only_v1.iter().find(|&&x| cur.get(x) != beta.get(x)) {
        let (a, b) = (cur.get(x), beta.get(x));
        let set: Vec<Vertex> = only_v1.iter().copied().filter(|&y| cur.get(y) == a || cur.get(y) == b).collect();
        for gm in moves_for_union(g, &cur, &set, a, b) {
            apply_move_in_place(g, &mut cur, gm)?;
            moves.push(gm);
        }
    }
    if cur != beta {
        return Err(KempeError::InternalInvariantBroken("separator routing did not reach the target".into()));
    }
    Ok(MoveSequence::from_moves(PROVENANCE_SEPARATOR, moves))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaRoute {
    Identical,
    Clique,
    Degenerate,
    Identification,
    FallbackLvm,
    FallbackOracle,
}

#[derive(Debug, Clone)]
pub struct DeltaOutcome {
    pub sequence: MoveSequence,
    pub route: DeltaRoute,
    /// Eligible pairs merged on the alpha and beta sides, when identification was used.
    pub pairs: Option<(EligiblePair, EligiblePair)>,
    pub warnings: Vec<String>,
}

impl DeltaOutcome {
    pub fn is_fallback(&self) -> bool {
        matches!(self.route, DeltaRoute::FallbackLvm | DeltaRoute::FallbackOracle)
    }
}

/// The 3-prism up to isomorphism: the only 3-regular graph on 6 vertices with a triangle.
pub fn is_three_prism(g: &Graph) -> bool {
    g.n() == 6 && g.is_regular() && g.max_degree() == 3 && g.has_triangle()
}

pub fn delta_equalize(g: &Graph, k: usize, alpha: &Coloring, beta: &Coloring) -> Result<DeltaOutcome> {
    if !g.is_connected() {
        return Err(KempeError::PreconditionViolated("graph is not connected".into()));
    }
    if g.max_degree() > k {
        return Err(KempeError::PreconditionViolated(format!("maximum degree {} exceeds k = {k}", g.max_degree())));
    }
    if k == 3 && is_three_prism(g) {
        return Err(KempeError::ThreePrismExcluded);
    }
    let alpha = alpha.with_palette(k)?;
    let beta = beta.with_palette(k)?;
    ensure_proper(g, &alpha, None)?;
    ensure_proper(g, &beta, None)?;
    let outcome = |moves: Vec<KempeMove>, route, pairs, warnings| DeltaOutcome {
        sequence: MoveSequence::from_moves(PROVENANCE, moves),
        route,
        pairs,
        warnings,
    };
    if alpha == beta {
        return Ok(outcome(Vec::new(), DeltaRoute::Identical, None, Vec::new()));
    }
    if g.is_complete() {
        let mut cur = alpha.clone();
        let mut moves = Vec::new();
        for v in g.vertices() {
            if cur.get(v) != beta.get(v) {
                let m = KempeMove::new(v, beta.get(v));
                apply_move_in_place(g, &mut cur, m)?;
                moves.push(m);
            }
        }
        return Ok(outcome(moves, DeltaRoute::Clique, None, Vec::new()));
    }
    let mut warnings = Vec::new();
    if !g.is_regular() || k > g.max_degree() {
        match degree_mode_moves(g, k, &alpha, &beta) {
            Ok(moves) => return Ok(outcome(moves, DeltaRoute::Degenerate, None, warnings)),
            Err(e) => warnings.push(format!("degree-mode equalization failed: {e}")),
        }
    } else {
        match identification_route(g, k, &alpha, &beta) {
            Ok((moves, pairs)) => return Ok(outcome(moves, DeltaRoute::Identification, Some(pairs), warnings)),
            Err(e) => warnings.push(format!("identification routing failed: {e}")),
        }
    }
    log::warn!("{}", warnings.join("; "));
    let (_, d) = degeneracy_ordering(g);
    if k > d {
        let seq = crate::lvm::lvm_sequence(g, &alpha, &beta, k)?;
        warnings.push("fell back to the peeling recursion".into());
        return Ok(outcome(seq.moves, DeltaRoute::FallbackLvm, None, warnings));
    }
    match crate::oracle::kempe_path(g, k, &alpha, &beta, FALLBACK_NODE_BUDGET)? {
        Some(seq) => {
            warnings.push("fell back to a brute-force shortest path".into());
            Ok(outcome(seq.moves, DeltaRoute::FallbackOracle, None, warnings))
        }
        None => Err(KempeError::RoutingFailed(format!(
            "colorings are not Kempe equivalent ({})",
            warnings.join("; ")
        ))),
    }
}

fn monochromatic_pairs(g: &Graph, col: &Coloring) -> Vec<EligiblePair> {
    let mut seen = std::collections::HashSet::new();
    g.vertices()
        .flat_map(|u| eligible_pairs(g, u))
        .filter(|p| col.get(p.pair.0) == col.get(p.pair.1) && seen.insert(p.pair))
        .collect()
}

fn identification_route(
    g: &Graph,
    k: usize,
    alpha: &Coloring,
    beta: &Coloring,
) -> Result<(Vec<KempeMove>, (EligiblePair, EligiblePair))> {
    let from_alpha = monochromatic_pairs(g, alpha);
    let from_beta = monochromatic_pairs(g, beta);
    if from_alpha.is_empty() || from_beta.is_empty() {
        return Err(KempeError::RoutingFailed("no monochromatic eligible pair".into()));
    }
    let mut last_error = None;
    for p in &from_alpha {
        for q in &from_beta {
            let Ok(double) = identify_pairs(g, &[p.pair, q.pair]) else { continue };
            let Some(qcol) = find_coloring(&double.quotient, k, COLORING_SEARCH_BUDGET) else { continue };
            let gamma = double.lift_coloring(&qcol);
            let attempt = leg(g, p.pair, k, alpha, &gamma).and_then(|mut first| {
                first.extend(leg(g, q.pair, k, &gamma, beta)?);
                Ok(first)
            });
            match attempt {
                Ok(moves) => return Ok((moves, (*p, *q))),
                Err(e) => last_error = Some(e),
            }
        }
    }
    Err(KempeError::RoutingFailed(match last_error {
        Some(e) => format!("every pair combination failed, last: {e}"),
        None => "no double identification admits a proper coloring".into(),
    }))
}

/// Moves from `from` to `to` (both constant on `pair`) through the quotient.
fn leg(g: &Graph, pair: (Vertex, Vertex), k: usize, from: &Coloring, to: &Coloring) -> Result<Vec<KempeMove>> {
    let id = identify(g, pair.0, pair.1)?;
    let qmoves = degree_mode_moves(&id.quotient, k, &id.project(from)?, &id.project(to)?)?;
    let mut cur = from.clone();
    let mut moves = Vec::new();
    for qm in qmoves {
        for m in lift_quotient_move(&id, &cur, qm)?.moves {
            apply_move_in_place(g, &mut cur, m)?;
            moves.push(m);
        }
        id.project(&cur)?;
    }
    if &cur != to {
        return Err(KempeError::InternalInvariantBroken("quotient leg missed its target".into()));
    }
    Ok(moves)
}

/// Backtracking k-coloring search, highest degree first, smallest color first.
pub fn find_coloring(g: &Graph, k: usize, budget: usize) -> Option<Coloring> {
    let n = g.n();
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut colors = vec![0 as Color; n];
    let mut steps = 0;
    fn go(g: &Graph, k: usize, order: &[Vertex], i: usize, colors: &mut [Color], steps: &mut usize, budget: usize) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for c in 1..=k {
            *steps += 1;
            if *steps > budget {
                return false;
            }
            if g.neighbors(v).iter().all(|&w| colors[w] != c) {
                colors[v] = c;
                if go(g, k, order, i + 1, colors, steps, budget) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }
    if go(g, k, &order, 0, &mut colors, &mut steps, budget) {
        Coloring::new(k.max(1), colors).ok()
    } else {
        None
    }
}
