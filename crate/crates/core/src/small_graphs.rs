//! Exhaustive catalogues of small graphs up to isomorphism.

use std::collections::HashMap;

use crate::graph::{Graph, Vertex};

type Invariant = (Vec<usize>, Vec<(usize, Vec<usize>, usize)>);

fn vertex_invariants(g: &Graph) -> Vec<(usize, Vec<usize>, usize)> {
    g.vertices()
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
            nd.sort_unstable();
            let nb = g.neighbors(v);
            let mut tri = 0;
            for (i, &a) in nb.iter().enumerate() {
                tri += nb[i + 1..].iter().filter(|&&b| g.has_edge(a, b)).count();
            }
            (g.degree(v), nd, tri)
        })
        .collect()
}

fn invariant(g: &Graph) -> Invariant {
    let mut degs: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    degs.sort_unstable();
    let mut vi = vertex_invariants(g);
    vi.sort();
    (degs, vi)
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let (ia, ib) = (vertex_invariants(a), vertex_invariants(b));
    let mut sa = ia.clone();
    let mut sb = ib.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let n = a.n();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_map(a, b, &ia, &ib, 0, &mut map, &mut used)
}

fn extend_map(
    a: &Graph,
    b: &Graph,
    ia: &[(usize, Vec<usize>, usize)],
    ib: &[(usize, Vec<usize>, usize)],
    v: Vertex,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == a.n() {
        return true;
    }
    for w in 0..b.n() {
        if used[w] || ia[v] != ib[w] {
            continue;
        }
        if (0..v).any(|u| a.has_edge(u, v) != b.has_edge(map[u], w)) {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend_map(a, b, ia, ib, v + 1, map, used) {
            return true;
        }
        used[w] = false;
    }
    map[v] = usize::MAX;
    false
}

/// Keeps one representative of each isomorphism class, in first-seen order.
pub fn dedup_isomorphic(graphs: impl IntoIterator<Item = Graph>) -> Vec<Graph> {
    let mut buckets: HashMap<Invariant, Vec<usize>> = HashMap::new();
    let mut reps: Vec<Graph> = Vec::new();
    for g in graphs {
        let bucket = buckets.entry(invariant(&g)).or_default();
        if bucket.iter().any(|&i| are_isomorphic(&reps[i], &g)) {
            continue;
        }
        bucket.push(reps.len());
        reps.push(g);
    }
    reps
}

/// All graphs on `n` vertices up to isomorphism, grown one vertex at a time.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut level = vec![Graph::empty(0)];
    for m in 1..=n {
        let mut candidates = Vec::new();
        for g in &level {
            for mask in 0u32..(1 << (m - 1)) {
                let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
                edges.extend((0..m - 1).filter(|&u| mask >> u & 1 == 1).map(|u| (u, m - 1)));
                candidates.push(Graph::new(m, edges).expect("simple"));
            }
        }
        level = dedup_isomorphic(candidates);
    }
    level
}

pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(Graph::is_connected).collect()
}

/// Connected `d`-regular graphs on `n` vertices up to isomorphism.
pub fn connected_regular_graphs(n: usize, d: usize) -> Vec<Graph> {
    let mut found = Vec::new();
    if n * d % 2 == 1 || d >= n.max(1) {
        return found;
    }
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    regular_rec(n, d, 0, 0, &mut deg, &mut edges, &mut found);
    dedup_isomorphic(found.into_iter().filter(Graph::is_connected))
}

fn regular_rec(
    n: usize,
    d: usize,
    v: Vertex,
    from: Vertex,
    deg: &mut [usize],
    edges: &mut Vec<(Vertex, Vertex)>,
    out: &mut Vec<Graph>,
) {
    if v == n {
        out.push(Graph::new(n, edges.clone()).expect("simple"));
        return;
    }
    if deg[v] == d {
        regular_rec(n, d, v + 1, v + 2, deg, edges, out);
        return;
    }
    for w in from.max(v + 1)..n {
        if deg[w] < d {
            deg[v] += 1;
            deg[w] += 1;
            edges.push((v, w));
            regular_rec(n, d, v, w + 1, deg, edges, out);
            edges.pop();
            deg[v] -= 1;
            deg[w] -= 1;
        }
    }
}
