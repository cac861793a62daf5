use serde::{Deserialize, Serialize};

use crate::error::{KempeError, Result};
use crate::graph::{Graph, Vertex};

pub type Color = usize;

/// Total map from vertices to colors in `1..=k`.
///
/// Properness is not part of the type; see [`is_proper`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ColoringRepr", into = "ColoringRepr")]
pub struct Coloring {
    k: usize,
    colors: Vec<Color>,
}

#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    k: usize,
    colors: Vec<Color>,
}

impl TryFrom<ColoringRepr> for Coloring {
    type Error = KempeError;
    fn try_from(r: ColoringRepr) -> Result<Self> {
        Coloring::new(r.k, r.colors)
    }
}

impl From<Coloring> for ColoringRepr {
    fn from(c: Coloring) -> Self {
        ColoringRepr { k: c.k, colors: c.colors }
    }
}

impl Coloring {
    pub fn new(k: usize, colors: Vec<Color>) -> Result<Self> {
        if let Some(&bad) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(KempeError::ColorOutOfRange { color: bad, k });
        }
        Ok(Coloring { k, colors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub(crate) fn set(&mut self, v: Vertex, c: Color) {
        debug_assert!(c >= 1 && c <= self.k);
        self.colors[v] = c;
    }

    /// Same colors over a larger palette.
    pub fn with_palette(&self, k: usize) -> Result<Coloring> {
        Coloring::new(k, self.colors.clone())
    }

    /// Coloring of the induced subgraph on `vertices` (same order).
    pub fn restrict(&self, vertices: &[Vertex]) -> Coloring {
        Coloring { k: self.k, colors: vertices.iter().map(|&v| self.colors[v]).collect() }
    }

    /// Vertices on which `self` and `other` differ.
    pub fn diff(&self, other: &Coloring) -> Vec<Vertex> {
        (0..self.len()).filter(|&v| self.colors[v] != other.colors[v]).collect()
    }

    /// Set of colors used on `set`, as a boolean mask indexed by color.
    pub fn used_on(&self, set: impl IntoIterator<Item = Vertex>) -> Vec<bool> {
        let mut used = vec![false; self.k + 1];
        for v in set {
            used[self.colors[v]] = true;
        }
        used
    }

    /// The partition into color classes, normalised so that two colorings
    /// that differ by a permutation of colors compare equal.
    pub fn partition(&self) -> Vec<Vec<Vertex>> {
        let mut classes: Vec<Vec<Vertex>> = vec![Vec::new(); self.k + 1];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c].push(v);
        }
        let mut out: Vec<Vec<Vertex>> = classes.into_iter().filter(|c| !c.is_empty()).collect();
        out.sort();
        out
    }
}

/// Per-vertex color lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ListsRepr", into = "ListsRepr")]
pub struct ListAssignment {
    lists: Vec<Vec<Color>>,
}

#[derive(Serialize, Deserialize)]
struct ListsRepr {
    lists: Vec<Vec<Color>>,
}

impl TryFrom<ListsRepr> for ListAssignment {
    type Error = KempeError;
    fn try_from(r: ListsRepr) -> Result<Self> {
        ListAssignment::new(r.lists)
    }
}

impl From<ListAssignment> for ListsRepr {
    fn from(l: ListAssignment) -> Self {
        ListsRepr { lists: l.lists }
    }
}

impl ListAssignment {
    pub fn new(mut lists: Vec<Vec<Color>>) -> Result<Self> {
        for (v, l) in lists.iter_mut().enumerate() {
            l.sort_unstable();
            l.dedup();
            if l.is_empty() {
                return Err(KempeError::PreconditionViolated(format!("empty list at vertex {v}")));
            }
            if l[0] == 0 {
                return Err(KempeError::ColorOutOfRange { color: 0, k: l[l.len() - 1] });
            }
        }
        Ok(ListAssignment { lists })
    }

    /// Every vertex gets the full palette `1..=k`.
    pub fn full(n: usize, k: usize) -> Self {
        ListAssignment { lists: vec![(1..=k).collect(); n] }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn list(&self, v: Vertex) -> &[Color] {
        &self.lists[v]
    }

    pub fn contains(&self, v: Vertex, c: Color) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    /// Largest color appearing in any list.
    pub fn palette(&self) -> usize {
        self.lists.iter().filter_map(|l| l.last().copied()).max().unwrap_or(0)
    }

    pub fn restrict(&self, vertices: &[Vertex]) -> ListAssignment {
        ListAssignment { lists: vertices.iter().map(|&v| self.lists[v].clone()).collect() }
    }
}

/// No monochromatic edge, and every vertex on its list when lists are given.
pub fn is_proper(g: &Graph, col: &Coloring, lists: Option<&ListAssignment>) -> bool {
    first_conflict(g, col, lists).is_none()
}

/// Human-readable reason why `col` is not proper, if it is not.
pub fn first_conflict(g: &Graph, col: &Coloring, lists: Option<&ListAssignment>) -> Option<String> {
    if col.len() != g.n() {
        return Some(format!("coloring has {} entries for {} vertices", col.len(), g.n()));
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| col.get(u) == col.get(v)) {
        return Some(format!("edge {u}-{v} is monochromatic"));
    }
    if let Some(l) = lists {
        if l.len() != g.n() {
            return Some(format!("{} lists for {} vertices", l.len(), g.n()));
        }
        if let Some(v) = g.vertices().find(|&v| !l.contains(v, col.get(v))) {
            return Some(format!("vertex {v} colored {} off its list", col.get(v)));
        }
    }
    None
}

/// Errors unless `col` is a proper coloring of `g` (on-list when lists are given).
pub fn ensure_proper(g: &Graph, col: &Coloring, lists: Option<&ListAssignment>) -> Result<()> {
    match first_conflict(g, col, lists) {
        Some(reason) => Err(KempeError::ImproperColoring(reason)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn range_checked() {
        assert!(matches!(
            Coloring::new(2, vec![1, 3]),
            Err(KempeError::ColorOutOfRange { color: 3, k: 2 })
        ));
        assert!(Coloring::new(2, vec![0]).is_err());
    }

    #[test]
    fn properness_examples() {
        let k3 = fixtures::k3();
        assert!(is_proper(&k3, &Coloring::new(3, vec![1, 2, 3]).unwrap(), None));
        assert!(!is_proper(&k3, &Coloring::new(3, vec![1, 1, 2]).unwrap(), None));
        let p3 = fixtures::path(3);
        let lists = ListAssignment::new(vec![vec![1], vec![2], vec![2]]).unwrap();
        let col = Coloring::new(2, vec![1, 2, 1]).unwrap();
        assert!(is_proper(&p3, &col, None));
        assert!(!is_proper(&p3, &col, Some(&lists)));
    }

    #[test]
    fn json_coloring() {
        let c: Coloring = serde_json::from_str(r#"{"k":3,"colors":[1,2,3]}"#).unwrap();
        assert_eq!(c.colors(), &[1, 2, 3]);
        assert!(serde_json::from_str::<Coloring>(r#"{"k":2,"colors":[1,2,3]}"#).is_err());
    }

    #[test]
    fn partition_ignores_relabeling() {
        let a = Coloring::new(3, vec![1, 2, 1, 3]).unwrap();
        let b = Coloring::new(3, vec![3, 1, 3, 2]).unwrap();
        assert_eq!(a.partition(), b.partition());
    }
}
