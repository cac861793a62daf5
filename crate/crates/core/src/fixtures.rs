//! Named small graphs used throughout the tests and the CLI.

use crate::coloring::Coloring;
use crate::graph::Graph;

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

pub fn k3() -> Graph {
    complete(3)
}

pub fn k4() -> Graph {
    complete(4)
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Star with center 0 and `leaves` leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).unwrap()
}

pub fn k33() -> Graph {
    complete_bipartite(3, 3)
}

/// The 3-prism: outer triangle `o1 o2 o3` (vertices 0..3), inner triangle
/// `i1 i2 i3` (vertices 3..6), and the matching `oj - ij`.
pub fn prism() -> Graph {
    Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
        .unwrap()
        .with_labels(["o1", "o2", "o3", "i1", "i2", "i3"].map(String::from).to_vec())
        .unwrap()
}

/// Left frozen coloring of the prism (1 = magenta, 2 = cyan, 3 = orange).
pub fn prism_frozen_left() -> Coloring {
    Coloring::new(3, vec![2, 3, 1, 1, 2, 3]).unwrap()
}

/// Right frozen coloring of the prism: same inner triangle, outer triangle
/// rotated.
pub fn prism_frozen_right() -> Coloring {
    Coloring::new(3, vec![3, 1, 2, 1, 2, 3]).unwrap()
}

/// K4 minus the edge 0-3: two triangles sharing the edge 1-2.
pub fn k4_minus_edge() -> Graph {
    Graph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Two triangles sharing vertex 0.
pub fn bowtie() -> Graph {
    Graph::new(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
}

/// The 4-cycle `0 1 2 3` plus the chord 0-2.
pub fn c4_with_chord() -> Graph {
    Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap()
}

/// Looks up a fixture by name (`k3`, `p4`, `c5`, `k4`, `k33`, `prism`, ...).
pub fn by_name(name: &str) -> Option<Graph> {
    let lower = name.to_ascii_lowercase();
    let num = |prefix: &str| lower.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    match lower.as_str() {
        "prism" | "3-prism" => Some(prism()),
        "k33" | "k3,3" => Some(k33()),
        "bowtie" => Some(bowtie()),
        "k4-e" => Some(k4_minus_edge()),
        _ => {
            if let Some(n) = num("k") {
                Some(complete(n))
            } else if let Some(n) = num("p") {
                Some(path(n))
            } else if let Some(n) = num("c").filter(|&n| n >= 3) {
                Some(cycle(n))
            } else {
                num("star").map(star)
            }
        }
    }
}
