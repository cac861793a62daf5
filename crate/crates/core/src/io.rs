//! File formats: graph JSON, DIMACS `.col`, PACE `.td`, and JSON helpers.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{KempeError, Result};
use crate::graph::{Graph, Vertex};
use crate::treewidth::TreeDecomposition;

/// Parses a DIMACS graph (`p edge n m`, `e u v` with 1-based vertices).
/// Repeated edges are merged.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            None | Some("c") => {}
            Some("p") => {
                let _format = parts.next();
                let count = parts
                    .next()
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| KempeError::Parse(format!("line {}: bad problem line", lineno + 1)))?;
                n = Some(count);
            }
            Some("e") => {
                let mut endpoint = || -> Result<Vertex> {
                    let x: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| KempeError::Parse(format!("line {}: bad edge line", lineno + 1)))?;
                    if x == 0 {
                        return Err(KempeError::Parse(format!("line {}: vertices are 1-based", lineno + 1)));
                    }
                    Ok(x - 1)
                };
                let u = endpoint()?;
                let v = endpoint()?;
                edges.push((u, v));
            }
            Some(other) => {
                return Err(KempeError::Parse(format!("line {}: unknown line type {other:?}", lineno + 1)));
            }
        }
    }
    let n = n.ok_or_else(|| KempeError::Parse("missing problem line".into()))?;
    Graph::from_edges_dedup(n, edges)
}

/// Parses a PACE tree decomposition: `s td <bags> <width+1> <n>`, bag lines
/// `b <id> <vertices>` and tree edges `<a> <b>`, all 1-based.
pub fn parse_pace_td(text: &str) -> Result<TreeDecomposition> {
    let mut bags: Vec<Vec<Vertex>> = Vec::new();
    let mut tree_edges = Vec::new();
    let mut declared = None;
    let bad = |lineno: usize, what: &str| KempeError::Parse(format!("line {}: {what}", lineno + 1));
    for (lineno, line) in text.lines().enumerate() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.first().copied() {
            None | Some("c") => {}
            Some("s") => {
                let nums: Vec<usize> = parts[2..]
                    .iter()
                    .map(|s| s.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad(lineno, "bad solution line"))?;
                if parts.get(1) != Some(&"td") || nums.len() != 3 {
                    return Err(bad(lineno, "expected `s td <bags> <width+1> <n>`"));
                }
                declared = Some((nums[0], nums[1], nums[2]));
                bags = vec![Vec::new(); nums[0]];
            }
            Some("b") => {
                let nums: Vec<usize> = parts[1..]
                    .iter()
                    .map(|s| s.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad(lineno, "bad bag line"))?;
                let id = *nums.first().ok_or_else(|| bad(lineno, "bag without id"))?;
                if id == 0 || id > bags.len() || nums[1..].contains(&0) {
                    return Err(bad(lineno, "bag id or vertex out of range"));
                }
                bags[id - 1] = nums[1..].iter().map(|x| x - 1).collect();
            }
            Some(_) => {
                let nums: Vec<usize> = parts
                    .iter()
                    .map(|s| s.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad(lineno, "bad tree edge"))?;
                if nums.len() != 2 || nums.contains(&0) {
                    return Err(bad(lineno, "bad tree edge"));
                }
                tree_edges.push((nums[0] - 1, nums[1] - 1));
            }
        }
    }
    let (_, width_plus_one, n) = declared.ok_or_else(|| KempeError::Parse("missing `s td` line".into()))?;
    let td = TreeDecomposition::new(n, bags, tree_edges);
    if td.bags.iter().map(Vec::len).max().unwrap_or(0) > width_plus_one {
        return Err(KempeError::Parse("a bag exceeds the declared width".into()));
    }
    Ok(td)
}

/// Writes a decomposition in PACE format.
pub fn format_pace_td(td: &TreeDecomposition) -> String {
    let mut out = format!("s td {} {} {}\n", td.bags.len(), td.width() + 1, td.n);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for (a, b) in &td.tree_edges {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

pub fn format_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// Reads a graph: DIMACS for `.col`/`.dimacs` files, JSON otherwise.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("col") | Some("dimacs") => parse_dimacs(&text),
        _ => Ok(serde_json::from_str(&text)?),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}
