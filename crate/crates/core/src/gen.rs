//! Random instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coloring::{Color, Coloring, ListAssignment};
use crate::graph::{Graph, Vertex};
use crate::ordering::{OrderingKind, VertexOrdering};
use crate::treewidth::TreeDecomposition;

pub fn gnp<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("simple by construction")
}

/// Connected graph: a random spanning tree plus G(n, p) edges.
pub fn connected_gnp<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges_dedup(n, edges).expect("simple by construction")
}

/// Uniformly shuffled backtracking search for a proper coloring from the lists
/// (or from `[k]` when `lists` is `None`).
pub fn random_coloring<R: Rng + ?Sized>(
    rng: &mut R,
    g: &Graph,
    k: usize,
    lists: Option<&ListAssignment>,
) -> Option<Coloring> {
    let n = g.n();
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.shuffle(rng);
    let options: Vec<Vec<Color>> = order
        .iter()
        .map(|&v| {
            let mut opts: Vec<Color> = match lists {
                Some(l) => l.list(v).to_vec(),
                None => (1..=k).collect(),
            };
            opts.shuffle(rng);
            opts
        })
        .collect();
    let mut colors = vec![0 as Color; n];
    let mut next = vec![0usize; n];
    let mut i = 0usize;
    let mut steps = 0usize;
    while i < n {
        steps += 1;
        if steps > 1_000_000 {
            return None;
        }
        let v = order[i];
        let mut placed = false;
        while next[i] < options[i].len() {
            let c = options[i][next[i]];
            next[i] += 1;
            if g.neighbors(v).iter().all(|&w| colors[w] != c) {
                colors[v] = c;
                placed = true;
                break;
            }
        }
        if placed {
            i += 1;
        } else {
            next[i] = 0;
            colors[v] = 0;
            if i == 0 {
                return None;
            }
            i -= 1;
            colors[order[i]] = 0;
        }
    }
    Coloring::new(k, colors).ok()
}

/// Random chordal graph with clique number at most `omega`, together with a
/// perfect elimination ordering.
pub fn chordal<R: Rng + ?Sized>(rng: &mut R, n: usize, omega: usize) -> (Graph, VertexOrdering) {
    let mut attach: Vec<Vec<Vertex>> = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for v in 0..n {
        let mut clique = Vec::new();
        if v > 0 && omega > 1 && rng.gen_bool(0.9) {
            let u = rng.gen_range(0..v);
            let mut pool = attach[u].clone();
            pool.shuffle(rng);
            let size = rng.gen_range(0..=pool.len().min(omega - 2));
            clique.push(u);
            clique.extend_from_slice(&pool[..size]);
        }
        for &w in &clique {
            edges.push((w, v));
        }
        attach.push(clique);
    }
    let g = Graph::new(n, edges).expect("simple by construction");
    let peo = VertexOrdering::new((0..n).rev().collect(), OrderingKind::Peo).expect("permutation");
    (g, peo)
}

/// Random partial `w`-tree on `n` vertices with a width-`w` tree
/// decomposition. Each edge of the underlying `w`-tree survives with
/// probability `keep`.
pub fn partial_ktree<R: Rng + ?Sized>(rng: &mut R, n: usize, w: usize, keep: f64) -> (Graph, TreeDecomposition) {
    let base = (w + 1).min(n);
    let mut bags: Vec<Vec<Vertex>> = vec![(0..base).collect()];
    let mut tree_edges = Vec::new();
    let mut edges = Vec::new();
    for u in 0..base {
        for v in u + 1..base {
            edges.push((u, v));
        }
    }
    for v in base..n {
        let b = rng.gen_range(0..bags.len());
        let mut clique = bags[b].clone();
        clique.shuffle(rng);
        clique.truncate(w);
        for &u in &clique {
            edges.push((u, v));
        }
        clique.push(v);
        bags.push(clique);
        tree_edges.push((b, bags.len() - 1));
    }
    edges.retain(|_| rng.gen_bool(keep));
    let g = Graph::new(n, edges).expect("simple by construction");
    (g, TreeDecomposition::new(n, bags, tree_edges))
}

/// Lists drawn from `[palette]` with `|L(v)| = deg(v) + 1 + slack`, capped at the palette.
pub fn degree_lists<R: Rng + ?Sized>(rng: &mut R, g: &Graph, palette: usize, slack: usize) -> ListAssignment {
    let lists = g
        .vertices()
        .map(|v| {
            let mut all: Vec<Color> = (1..=palette).collect();
            all.shuffle(rng);
            all.truncate((g.degree(v) + 1 + slack).min(palette));
            all
        })
        .collect();
    ListAssignment::new(lists).expect("non-empty lists")
}
