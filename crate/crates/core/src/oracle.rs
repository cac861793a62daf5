//! Brute force at desk scale: all proper k-colorings, the reconfiguration
//! graph whose edges are single Kempe changes, its classes and distances.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring};
use crate::error::{KempeError, Result};
use crate::graph::{Graph, Vertex};
use crate::kempe::{apply_move, chain_within, KempeMove, MoveSequence};

pub const PROVENANCE: &str = "oracle";

/// Classes larger than this get no diameter.
pub const DIAMETER_NODE_LIMIT: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_n: usize,
    pub max_k: usize,
    pub max_colorings: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_n: 10, max_k: 4, max_colorings: 1_000_000 }
    }
}

impl Budget {
    pub fn unbounded_palette(max_colorings: usize) -> Self {
        Budget { max_n: 12, max_k: 12, max_colorings }
    }
}

pub fn enumerate_colorings(g: &Graph, k: usize) -> Result<Vec<Coloring>> {
    enumerate_colorings_with(g, k, &Budget::default())
}

/// All proper k-colorings in lexicographic order.
pub fn enumerate_colorings_with(g: &Graph, k: usize, budget: &Budget) -> Result<Vec<Coloring>> {
    if g.n() > budget.max_n || k > budget.max_k {
        return Err(KempeError::BudgetExceeded(format!(
            "n = {}, k = {k} exceeds n <= {}, k <= {}",
            g.n(),
            budget.max_n,
            budget.max_k
        )));
    }
    let n = g.n();
    let mut out = Vec::new();
    if k == 0 {
        return Ok(out);
    }
    let mut colors = vec![0 as Color; n];
    let mut v = 0usize;
    // Iterative backtracking: colors[v] is the color being tried at v.
    loop {
        if v == n {
            if out.len() == budget.max_colorings {
                return Err(KempeError::BudgetExceeded(format!("more than {} colorings", budget.max_colorings)));
            }
            out.push(Coloring::new(k, colors.clone())?);
            if n == 0 {
                break;
            }
            v -= 1;
        }
        let mut next = colors[v] + 1;
        while next <= k && g.neighbors(v).iter().any(|&w| w < v && colors[w] == next) {
            next += 1;
        }
        if next <= k {
            colors[v] = next;
            v += 1;
        } else {
            colors[v] = 0;
            if v == 0 {
                break;
            }
            v -= 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ReconfGraph {
    pub nodes: Vec<Coloring>,
    pub adjacency: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub num_classes: usize,
    index: HashMap<Vec<Color>, usize>,
}

pub fn build_reconf(g: &Graph, k: usize) -> Result<ReconfGraph> {
    build_reconf_with(g, k, &Budget::default())
}

pub fn build_reconf_with(g: &Graph, k: usize, budget: &Budget) -> Result<ReconfGraph> {
    let nodes = enumerate_colorings_with(g, k, budget)?;
    let index: HashMap<Vec<Color>, usize> = nodes.iter().enumerate().map(|(i, c)| (c.colors().to_vec(), i)).collect();
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for (i, col) in nodes.iter().enumerate() {
        for v in g.vertices() {
            for c in 1..=k {
                if c == col.get(v) {
                    continue;
                }
                let next = apply_move(g, col, KempeMove::new(v, c))?;
                let j = index[next.colors()];
                if j != i {
                    adjacency[i].push(j);
                }
            }
        }
        adjacency[i].sort_unstable();
        adjacency[i].dedup();
    }
    let mut class_of = vec![usize::MAX; nodes.len()];
    let mut num_classes = 0;
    for s in 0..nodes.len() {
        if class_of[s] != usize::MAX {
            continue;
        }
        class_of[s] = num_classes;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adjacency[x] {
                if class_of[y] == usize::MAX {
                    class_of[y] = num_classes;
                    queue.push_back(y);
                }
            }
        }
        num_classes += 1;
    }
    Ok(ReconfGraph { nodes, adjacency, class_of, num_classes, index })
}

impl ReconfGraph {
    pub fn index_of(&self, col: &Coloring) -> Option<usize> {
        self.index.get(col.colors()).copied()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_classes];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn same_class(&self, a: &Coloring, b: &Coloring) -> Option<bool> {
        Some(self.class_of[self.index_of(a)?] == self.class_of[self.index_of(b)?])
    }

    /// BFS distances from node `s`; `usize::MAX` outside its class.
    pub fn distances_from(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adjacency[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Diameter of each class, or `None` for classes above the node limit.
    pub fn diameters(&self) -> Vec<Option<usize>> {
        let mut out = vec![Some(0); self.num_classes];
        let sizes = self.class_sizes();
        for (c, d) in out.iter_mut().enumerate() {
            if sizes[c] > DIAMETER_NODE_LIMIT {
                *d = None;
            }
        }
        for s in 0..self.nodes.len() {
            let c = self.class_of[s];
            if let Some(best) = out[c] {
                let far = self.distances_from(s).into_iter().filter(|&d| d != usize::MAX).max().unwrap_or(0);
                out[c] = Some(best.max(far));
            }
        }
        out
    }

    pub fn report(&self, g: &Graph) -> OracleReport {
        OracleReport {
            num_colorings: self.nodes.len(),
            num_classes: self.num_classes,
            class_sizes: self.class_sizes(),
            diameter_per_class: self.diameters(),
            frozen: (0..self.nodes.len()).filter(|&i| is_frozen(g, &self.nodes[i])).collect(),
        }
    }
}

/// BFS distance in the reconfiguration graph; `None` across classes.
pub fn shortest_path(rg: &ReconfGraph, a: &Coloring, b: &Coloring) -> Option<usize> {
    let (i, j) = (rg.index_of(a)?, rg.index_of(b)?);
    let d = rg.distances_from(i)[j];
    (d != usize::MAX).then_some(d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub num_colorings: usize,
    pub num_classes: usize,
    pub class_sizes: Vec<usize>,
    pub diameter_per_class: Vec<Option<usize>>,
    pub frozen: Vec<usize>,
}

/// Every two-color subgraph over the palette is connected (empty ones count as connected).
pub fn is_frozen(g: &Graph, col: &Coloring) -> bool {
    let k = col.k();
    for a in 1..=k {
        for b in a + 1..=k {
            let set: Vec<Vertex> = g.vertices().filter(|&v| col.get(v) == a || col.get(v) == b).collect();
            let Some(&first) = set.first() else { continue };
            let other = if col.get(first) == a { b } else { a };
            if chain_within(g, col, first, other, |_| true).len() != set.len() {
                return false;
            }
        }
    }
    true
}

/// Shortest move sequence from `a` to `b` found by BFS over colorings,
/// visiting at most `max_nodes` colorings; `None` when `b` is unreachable.
pub fn kempe_path(g: &Graph, k: usize, a: &Coloring, b: &Coloring, max_nodes: usize) -> Result<Option<MoveSequence>> {
    let a = a.with_palette(k)?;
    let b = b.with_palette(k)?;
    let mut parent: HashMap<Vec<Color>, Option<(Vec<Color>, KempeMove)>> = HashMap::new();
    parent.insert(a.colors().to_vec(), None);
    let mut queue = VecDeque::from([a.clone()]);
    let mut found = a == b;
    while let Some(x) = queue.pop_front() {
        if found {
            break;
        }
        for v in g.vertices() {
            for c in 1..=k {
                if c == x.get(v) {
                    continue;
                }
                let m = KempeMove::new(v, c);
                let y = apply_move(g, &x, m)?;
                if parent.contains_key(y.colors()) {
                    continue;
                }
                if parent.len() >= max_nodes {
                    return Err(KempeError::BudgetExceeded(format!("more than {max_nodes} colorings visited")));
                }
                parent.insert(y.colors().to_vec(), Some((x.colors().to_vec(), m)));
                if y == b {
                    found = true;
                }
                queue.push_back(y);
            }
        }
    }
    if !found {
        return Ok(None);
    }
    let mut moves = Vec::new();
    let mut cur = b.colors().to_vec();
    while let Some(Some((prev, m))) = parent.get(&cur) {
        moves.push(*m);
        cur = prev.clone();
    }
    moves.reverse();
    Ok(Some(MoveSequence::from_moves(PROVENANCE, moves)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::kempe::verify_sequence;

    fn col(k: usize, c: &[usize]) -> Coloring {
        Coloring::new(k, c.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_colorings(&fixtures::k3(), 3).unwrap().len(), 6);
        assert!(enumerate_colorings(&fixtures::k4(), 3).unwrap().is_empty());
        let prism = enumerate_colorings(&fixtures::prism(), 3).unwrap();
        assert_eq!(prism.len(), 12);
        assert!(prism.windows(2).all(|w| w[0].colors() < w[1].colors()));
        assert!(matches!(enumerate_colorings(&Graph::empty(11), 2), Err(KempeError::BudgetExceeded(_))));
        let tight = Budget { max_colorings: 5, ..Budget::default() };
        assert!(matches!(enumerate_colorings_with(&fixtures::k3(), 3, &tight), Err(KempeError::BudgetExceeded(_))));
        assert_eq!(enumerate_colorings(&Graph::empty(0), 2).unwrap().len(), 1);
    }

    #[test]
    fn reconf_examples() {
        let k3 = fixtures::k3();
        let rg = build_reconf(&k3, 3).unwrap();
        assert_eq!(rg.num_classes, 1);
        assert_eq!(shortest_path(&rg, &col(3, &[1, 2, 3]), &col(3, &[2, 1, 3])), Some(1));
        assert_eq!(shortest_path(&rg, &col(3, &[1, 2, 3]), &col(3, &[1, 2, 3])), Some(0));

        let rg = build_reconf(&fixtures::path(4), 2).unwrap();
        assert_eq!((rg.nodes.len(), rg.num_classes), (2, 1));

        let prism = fixtures::prism();
        let rg = build_reconf(&prism, 3).unwrap();
        assert!(rg.num_classes >= 2);
        let (l, r) = (fixtures::prism_frozen_left(), fixtures::prism_frozen_right());
        assert_eq!(rg.same_class(&l, &r), Some(false));
        assert_eq!(shortest_path(&rg, &l, &r), None);
        let report = rg.report(&prism);
        assert_eq!(report.frozen.len(), 12);
        assert_eq!(report.class_sizes, vec![6, 6]);
    }

    #[test]
    fn frozen_examples() {
        assert!(is_frozen(&fixtures::prism(), &fixtures::prism_frozen_left()));
        assert!(is_frozen(&fixtures::k3(), &col(3, &[1, 2, 3])));
        assert!(is_frozen(&fixtures::path(4), &col(2, &[1, 2, 1, 2])));
        assert!(is_frozen(&fixtures::cycle(6), &col(2, &[1, 2, 1, 2, 1, 2])));
        let two_edges = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!is_frozen(&two_edges, &col(2, &[1, 2, 1, 2])));
    }

    #[test]
    fn symmetric_edges() {
        let rg = build_reconf(&fixtures::cycle(5), 3).unwrap();
        for (i, nb) in rg.adjacency.iter().enumerate() {
            for &j in nb {
                assert!(rg.adjacency[j].contains(&i));
            }
        }
    }

    #[test]
    fn bfs_path_matches_distance() {
        let g = fixtures::cycle(5);
        let rg = build_reconf(&g, 3).unwrap();
        let (a, b) = (&rg.nodes[0], &rg.nodes[rg.nodes.len() - 1]);
        let seq = kempe_path(&g, 3, a, b, 10_000).unwrap().unwrap();
        assert_eq!(Some(seq.len()), shortest_path(&rg, a, b));
        assert_eq!(&verify_sequence(&g, a, &seq, None).unwrap(), b);
        let prism = fixtures::prism();
        let none = kempe_path(&prism, 3, &fixtures::prism_frozen_left(), &fixtures::prism_frozen_right(), 10_000);
        assert_eq!(none.unwrap(), None);
    }
}
