//! Recoloring through a chordal supergraph: completion and perfect
//! elimination orderings, the single-pass chordal equalizer, fitting a
//! coloring of `G` onto the completion `H`, and the driver combining them.

use serde::Serialize;

use crate::coloring::{ensure_proper, first_conflict, Color, Coloring};
use crate::error::{KempeError, Result};
use crate::graph::{Graph, Vertex};
use crate::kempe::{chain_within, invert_moves, moves_for_union, swap_on, KempeMove, MoveSequence};
use crate::ordering::{OrderingKind, VertexOrdering};

pub const PROVENANCE: &str = "treewidth";
pub const PROVENANCE_CHORDAL: &str = "chordal";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub n: usize,
    pub bags: Vec<Vec<Vertex>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(n: usize, bags: Vec<Vec<Vertex>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { n, bags, tree_edges }
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |msg: String| Err(KempeError::InvalidDecomposition(msg));
        if self.n != g.n() {
            return bad(format!("decomposition has {} vertices, graph has {}", self.n, g.n()));
        }
        let b = self.bags.len();
        if let Some(&v) = self.bags.iter().flatten().find(|&&v| v >= self.n) {
            return bad(format!("bag vertex {v} out of range"));
        }
        if b > 0 {
            let tree = Graph::new(b, self.tree_edges.iter().copied())
                .map_err(|e| KempeError::InvalidDecomposition(format!("tree edges: {e}")))?;
            if tree.edge_count() != b - 1 || !tree.is_connected() {
                return bad("bags do not form a tree".into());
            }
            for v in g.vertices() {
                let holding: Vec<usize> = (0..b).filter(|&i| self.bags[i].binary_search(&v).is_ok()).collect();
                if holding.is_empty() {
                    return bad(format!("vertex {v} is in no bag"));
                }
                if tree.components_within(&holding).len() != 1 {
                    return bad(format!("bags holding vertex {v} are not connected"));
                }
            }
        } else if g.n() > 0 {
            return bad("no bags".into());
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|bag| bag.binary_search(&u).is_ok() && bag.binary_search(&v).is_ok()) {
                return bad(format!("edge {u}-{v} is in no bag"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordalCompletion {
    pub host: Graph,
    pub peo: VertexOrdering,
    /// `max |N+_H[v]| - 1`.
    pub width: usize,
    /// `E(H) \ E(G)` as `(v, w)` with `v` before `w`, sorted by their positions.
    pub fill_edges: Vec<(Vertex, Vertex)>,
}

/// Maximum cardinality search (ties by smallest id); the reversed visit order
/// is returned after checking that every `N+[v]` is a clique.
pub fn peo(h: &Graph) -> Result<VertexOrdering> {
    let n = h.n();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !visited[v]).max_by_key(|&v| (weight[v], std::cmp::Reverse(v))).expect("left");
        visited[v] = true;
        visit.push(v);
        for &w in h.neighbors(v) {
            weight[w] += 1;
        }
    }
    visit.reverse();
    let ord = VertexOrdering::new(visit, OrderingKind::Peo).expect("permutation");
    check_peo(h, &ord)?;
    Ok(ord)
}

pub fn check_peo(h: &Graph, ord: &VertexOrdering) -> Result<()> {
    for v in h.vertices() {
        let up = ord.higher_neighbors(h, v);
        for (i, &a) in up.iter().enumerate() {
            if let Some(&b) = up[i + 1..].iter().find(|&&b| !h.has_edge(a, b)) {
                return Err(KempeError::NotChordal { vertex: v, a, b });
            }
        }
    }
    Ok(())
}

/// Chordal supergraph of `g`: the union of the bag cliques of `td` when
/// given, otherwise a min-fill elimination (ties by smallest id).
pub fn chordal_completion(g: &Graph, td: Option<&TreeDecomposition>) -> Result<ChordalCompletion> {
    let (host, ord) = match td {
        Some(td) => {
            td.validate(g)?;
            let mut extra = Vec::new();
            for bag in &td.bags {
                for (i, &a) in bag.iter().enumerate() {
                    for &b in &bag[i + 1..] {
                        extra.push((a, b));
                    }
                }
            }
            let host = g.with_edges(&extra)?;
            let ord = peo(&host)?;
            (host, ord)
        }
        None => min_fill(g)?,
    };
    let width = host.vertices().map(|v| ord.higher_degree(&host, v)).max().unwrap_or(0);
    let mut fill_edges: Vec<(Vertex, Vertex)> = host
        .edges()
        .filter(|&(u, v)| !g.has_edge(u, v))
        .map(|(u, v)| if ord.precedes(u, v) { (u, v) } else { (v, u) })
        .collect();
    fill_edges.sort_by_key(|&(v, w)| (ord.position(v), ord.position(w)));
    Ok(ChordalCompletion { host, peo: ord, width, fill_edges })
}

fn min_fill(g: &Graph) -> Result<(Graph, VertexOrdering)> {
    let n = g.n();
    let mut adj: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut fill = Vec::new();
    for _ in 0..n {
        let missing = |v: Vertex, adj: &Vec<Vec<bool>>, removed: &Vec<bool>| -> Vec<(Vertex, Vertex)> {
            let nb: Vec<Vertex> = (0..n).filter(|&w| !removed[w] && adj[v][w]).collect();
            let mut out = Vec::new();
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a][b] {
                        out.push((a, b));
                    }
                }
            }
            out
        };
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (missing(v, &adj, &removed).len(), v))
            .expect("a vertex remains");
        for (a, b) in missing(v, &adj, &removed) {
            adj[a][b] = true;
            adj[b][a] = true;
            fill.push((a, b));
        }
        removed[v] = true;
        order.push(v);
    }
    let host = g.with_edges(&fill)?;
    let ord = VertexOrdering::new(order, OrderingKind::Peo).expect("permutation");
    check_peo(&host, &ord)?;
    Ok((host, ord))
}

/// At most `n` moves from `alpha` to `beta` in the chordal graph `h`,
/// processing the ordering from its last vertex down.
pub fn chordal_equalize(
    h: &Graph,
    ord: &VertexOrdering,
    alpha: &Coloring,
    beta: &Coloring,
    p: usize,
) -> Result<MoveSequence> {
    if ord.len() != h.n() {
        return Err(KempeError::PreconditionViolated("ordering size differs from graph".into()));
    }
    check_peo(h, ord)?;
    let mut cur = alpha.with_palette(p)?;
    let beta = beta.with_palette(p)?;
    ensure_proper(h, &cur, None)?;
    ensure_proper(h, &beta, None)?;
    let mut moves = Vec::new();
    for j in (0..h.n()).rev() {
        let v = ord.vertex_at(j);
        let target = beta.get(v);
        if cur.get(v) == target {
            continue;
        }
        let chain = chain_within(h, &cur, v, target, |_| true);
        if let Some(&w) = chain.iter().find(|&&w| ord.position(w) > j) {
            return Err(KempeError::InternalInvariantBroken(format!(
                "chain of {v} reaches the later vertex {w}"
            )));
        }
        let a = cur.get(v);
        swap_on(&mut cur, &chain, a, target);
        moves.push(KempeMove::new(v, target));
    }
    Ok(MoveSequence::from_moves(PROVENANCE_CHORDAL, moves))
}

/// Counters checked while fitting a coloring onto the host.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FitStats {
    /// Fill edges whose endpoints shared a color.
    pub firings: usize,
    /// Per vertex: how many times it was recolored to clear a common neighbor.
    pub u_roles: Vec<usize>,
    /// Moves made in the augmented graph.
    pub host_moves: usize,
    /// Fill edges that needed smaller neighbors of `v` cleared beyond the
    /// common ones.
    pub repairs: usize,
}

impl FitStats {
    pub fn max_u_roles(&self) -> usize {
        self.u_roles.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct Fitted {
    pub coloring: Coloring,
    pub sequence: MoveSequence,
    pub stats: FitStats,
}

/// Recolors `alpha` (proper on `g`) into a coloring proper on the host,
/// adding fill edges one at a time; every move of the augmented graph is
/// expanded into one move per component in `g`.
pub fn fit_to_host(g: &Graph, cc: &ChordalCompletion, alpha: &Coloring, k: usize) -> Result<Fitted> {
    if k < cc.width + 1 {
        return Err(KempeError::PaletteTooSmall { needed: cc.width + 1, k });
    }
    if !g.is_subgraph_of(&cc.host) {
        return Err(KempeError::PreconditionViolated("graph is not a subgraph of the host".into()));
    }
    let mut cur = alpha.with_palette(k)?;
    ensure_proper(g, &cur, None)?;
    let ord = &cc.peo;
    let mut tilde = g.clone();
    let mut moves = Vec::new();
    let mut fired = vec![false; g.n()];
    let mut stats = FitStats { u_roles: vec![0; g.n()], ..FitStats::default() };

    let host_move = |tilde: &Graph, cur: &mut Coloring, x: Vertex, c: Color, moves: &mut Vec<KempeMove>| {
        let chain = chain_within(tilde, cur, x, c, |_| true);
        let a = cur.get(x);
        moves.extend(moves_for_union(g, cur, &chain, a, c));
        swap_on(cur, &chain, a, c);
        chain
    };

    for &(v, w) in &cc.fill_edges {
        if cur.get(v) == cur.get(w) {
            if fired[v] {
                return Err(KempeError::InternalInvariantBroken(format!("fill edges at {v} fired twice")));
            }
            fired[v] = true;
            stats.firings += 1;
            let used = cur.used_on(ord.higher_neighbors(&cc.host, v).into_iter().chain([v]));
            let c = (1..=k).find(|&x| !used[x]).ok_or_else(|| {
                KempeError::InternalInvariantBroken(format!("no color free above {v} in the host"))
            })?;
            let mut common: Vec<Vertex> = tilde
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| ord.precedes(u, v) && ord.precedes(u, w) && tilde.has_edge(u, w))
                .collect();
            common.sort_by_key(|&u| ord.position(u));
            let clear = |cur: &mut Coloring, moves: &mut Vec<KempeMove>, stats: &mut FitStats, below: &[Vertex]| {
                for &u in below.iter().rev() {
                    if cur.get(u) != c {
                        continue;
                    }
                    let used = cur.used_on(ord.higher_neighbors(&tilde, u).into_iter().chain([u]));
                    let ci = (1..=k).find(|&x| !used[x]).ok_or_else(|| {
                        KempeError::InternalInvariantBroken(format!("no color free above {u}"))
                    })?;
                    let chain = host_move(&tilde, cur, u, ci, moves);
                    stats.host_moves += 1;
                    stats.u_roles[u] += 1;
                    if let Some(&x) = chain.iter().find(|&&x| ord.precedes(u, x)) {
                        return Err(KempeError::InternalInvariantBroken(format!(
                            "clearing change at {u} reaches the later vertex {x}"
                        )));
                    }
                }
                Ok(())
            };
            clear(&mut cur, &mut moves, &mut stats, &common)?;
            // A smaller neighbor of v carrying c and adjacent to some later
            // host neighbor x of v with x colored like v lets the chain at v
            // climb to x. w is one such x; the others are cleared as well.
            let shade = cur.get(v);
            let mut linked: Vec<Vertex> = ord
                .lower_neighbors(&tilde, v)
                .into_iter()
                .filter(|&y| {
                    tilde.neighbors(y).iter().any(|&x| ord.precedes(v, x) && cc.host.has_edge(v, x) && cur.get(x) == shade)
                })
                .collect();
            if linked.iter().any(|&u| cur.get(u) == c) {
                linked.sort_by_key(|&u| ord.position(u));
                clear(&mut cur, &mut moves, &mut stats, &linked)?;
                stats.repairs += 1;
            }
            if let Some(&x) = chain_within(&tilde, &cur, v, c, |_| true).iter().find(|&&x| ord.precedes(v, x)) {
                return Err(KempeError::InternalInvariantBroken(format!("change at {v} reaches the later vertex {x}")));
            }
            if cur.get(v) != c {
                host_move(&tilde, &mut cur, v, c, &mut moves);
                stats.host_moves += 1;
            }
            if cur.get(v) == cur.get(w) {
                return Err(KempeError::InternalInvariantBroken(format!("fill edge {v}-{w} still monochromatic")));
            }
        }
        tilde = tilde.with_edges(&[(v, w)])?;
        if let Some(msg) = first_conflict(&tilde, &cur, None) {
            return Err(KempeError::InternalInvariantBroken(format!("augmented coloring improper: {msg}")));
        }
    }
    Ok(Fitted { coloring: cur, sequence: MoveSequence::from_moves(PROVENANCE, moves), stats })
}


/// Replays moves of `h` from `start` as moves of `g`, one per component of
/// each host chain in `g`, ordered by smallest vertex.
pub fn simulate_host_moves(g: &Graph, h: &Graph, start: &Coloring, host_moves: &MoveSequence) -> Result<MoveSequence> {
    if !g.is_subgraph_of(h) {
        return Err(KempeError::PreconditionViolated("graph is not a subgraph of the host".into()));
    }
    let mut cur = start.clone();
    let mut moves = Vec::new();
    for (index, &m) in host_moves.moves.iter().enumerate() {
        let a = cur.get(m.vertex);
        let mut after = cur.clone();
        let chain = crate::kempe::apply_move_in_place(h, &mut after, m)
            .map_err(|e| KempeError::InvalidMove { index, reason: e.to_string() })?;
        for gm in moves_for_union(g, &cur, &chain, a, m.target_color) {
            crate::kempe::apply_move_in_place(g, &mut cur, gm)?;
            moves.push(gm);
        }
        if cur != after {
            return Err(KempeError::InternalInvariantBroken(format!("simulation of host move {index} diverged")));
        }
    }
    Ok(MoveSequence::from_moves(PROVENANCE, moves))
}

#[derive(Debug, Clone)]
pub struct TwOutcome {
    pub sequence: MoveSequence,
    pub completion: ChordalCompletion,
    pub fit_alpha: FitStats,
    pub fit_beta: FitStats,
    pub host_moves: usize,
}

pub fn tw_equalize(
    g: &Graph,
    td: Option<&TreeDecomposition>,
    alpha: &Coloring,
    beta: &Coloring,
    k: usize,
) -> Result<TwOutcome> {
    let cc = chordal_completion(g, td)?;
    if k < cc.width + 1 {
        return Err(KempeError::PaletteTooSmall { needed: cc.width + 1, k });
    }
    let beta = beta.with_palette(k)?;
    if alpha.with_palette(k)? == beta {
        ensure_proper(g, &beta, None)?;
        return Ok(TwOutcome {
            sequence: MoveSequence::new(PROVENANCE),
            completion: cc,
            fit_alpha: FitStats::default(),
            fit_beta: FitStats::default(),
            host_moves: 0,
        });
    }
    let fa = fit_to_host(g, &cc, alpha, k)?;
    let fb = fit_to_host(g, &cc, &beta, k)?;
    let host = chordal_equalize(&cc.host, &cc.peo, &fa.coloring, &fb.coloring, k)?;
    let middle = simulate_host_moves(g, &cc.host, &fa.coloring, &host)?;
    let back = invert_moves(g, &beta, &fb.sequence.moves)?;
    let mut moves = fa.sequence.moves.clone();
    moves.extend(middle.moves);
    moves.extend(back);
    Ok(TwOutcome {
        sequence: MoveSequence::from_moves(PROVENANCE, moves),
        host_moves: host.len(),
        completion: cc,
        fit_alpha: fa.stats,
        fit_beta: fb.stats,
    })
}
