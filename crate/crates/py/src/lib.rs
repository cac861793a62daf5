//! Python bindings for `kempe-core`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use kempe_core::coloring::{Coloring as CoreColoring, ListAssignment};
use kempe_core::degenerate::{list_ordering, minimal_degree_bound, RecolorSetting, Recolorer};
use kempe_core::error::KempeError as CoreError;
use kempe_core::graph::Graph as CoreGraph;
use kempe_core::kempe::{apply_move, kempe_chain, verify_sequence, KempeMove, MoveSequence};
use kempe_core::oracle::{build_reconf_with, kempe_path as core_kempe_path, Budget};
use kempe_core::treewidth::{chordal_equalize, peo, tw_equalize};
use kempe_core::{delta_equalize, lvm_sequence, mad_equalize};

create_exception!(kempe, KempeError, PyException);

fn err(e: CoreError) -> PyErr {
    let kind = format!("{e:?}");
    let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error");
    KempeError::new_err(format!("{kind}: {e}"))
}

type Move = (usize, usize);

fn to_moves(seq: &MoveSequence) -> Vec<Move> {
    seq.moves.iter().map(|m| (m.vertex, m.target_color)).collect()
}

fn from_moves(moves: &[Move]) -> Vec<KempeMove> {
    moves.iter().map(|&(v, c)| KempeMove::new(v, c)).collect()
}

fn lists_of(lists: Option<Vec<Vec<usize>>>) -> PyResult<Option<ListAssignment>> {
    lists.map(ListAssignment::new).transpose().map_err(err)
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(frozen, module = "kempe")]
struct Graph {
    inner: CoreGraph,
}

#[pymethods]
impl Graph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Graph { inner: CoreGraph::new(n, edges).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.check(v)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.check(v)?;
        Ok(self.inner.degree(v))
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.edge_count())
    }
}

impl Graph {
    fn check(&self, v: usize) -> PyResult<()> {
        if v >= self.inner.n() {
            return Err(err(CoreError::VertexOutOfRange(v)));
        }
        Ok(())
    }
}

/// Proper or improper assignment of colors `1..=k`.
#[pyclass(frozen, module = "kempe")]
struct Coloring {
    inner: CoreColoring,
}

#[pymethods]
impl Coloring {
    #[new]
    fn new(k: usize, colors: Vec<usize>) -> PyResult<Self> {
        Ok(Coloring { inner: CoreColoring::new(k, colors).map_err(err)? })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn colors(&self) -> Vec<usize> {
        self.inner.colors().to_vec()
    }

    #[pyo3(signature = (graph, lists = None))]
    fn is_proper(&self, graph: &Graph, lists: Option<Vec<Vec<usize>>>) -> PyResult<bool> {
        Ok(kempe_core::is_proper(&graph.inner, &self.inner, lists_of(lists)?.as_ref()))
    }

    fn __eq__(&self, other: &Coloring) -> bool {
        self.inner.colors() == other.inner.colors()
    }

    fn __repr__(&self) -> String {
        format!("Coloring(k={}, colors={:?})", self.inner.k(), self.inner.colors())
    }
}

fn wrap(inner: CoreColoring) -> Coloring {
    Coloring { inner }
}

/// Vertices of the two-colored component containing `v` that a move `(v, c)` would swap.
#[pyfunction]
fn chain(graph: &Graph, coloring: &Coloring, v: usize, c: usize) -> PyResult<Vec<usize>> {
    kempe_chain(&graph.inner, &coloring.inner, v, c).map_err(err)
}

#[pyfunction]
fn apply(graph: &Graph, coloring: &Coloring, v: usize, c: usize) -> PyResult<Coloring> {
    apply_move(&graph.inner, &coloring.inner, KempeMove::new(v, c)).map(wrap).map_err(err)
}

/// Replays `moves` from `start`, checking each step, and returns the final coloring.
#[pyfunction]
#[pyo3(signature = (graph, start, moves, lists = None))]
fn verify(graph: &Graph, start: &Coloring, moves: Vec<Move>, lists: Option<Vec<Vec<usize>>>) -> PyResult<Coloring> {
    let seq = MoveSequence::from_moves("python", from_moves(&moves));
    verify_sequence(&graph.inner, &start.inner, &seq, lists_of(lists)?.as_ref()).map(wrap).map_err(err)
}

/// Kempe moves turning `start` into `target`.
///
/// `method` is one of `lvm`, `degenerate`, `list`, `mad`, `treewidth`, `delta`, `chordal`.
#[pyfunction]
#[pyo3(signature = (graph, start, target, k, method = "degenerate", lists = None, epsilon = 0.5))]
fn recolor(
    py: Python<'_>,
    graph: &Graph,
    start: &Coloring,
    target: &Coloring,
    k: usize,
    method: &str,
    lists: Option<Vec<Vec<usize>>>,
    epsilon: f64,
) -> PyResult<Vec<Move>> {
    let lists = lists_of(lists)?;
    let (g, a, b) = (&graph.inner, &start.inner, &target.inner);
    let a = a.with_palette(k).map_err(err)?;
    let b = b.with_palette(k).map_err(err)?;
    let run = || -> Result<MoveSequence, CoreError> {
        Ok(match method {
            "lvm" => lvm_sequence(g, &a, &b, k)?,
            "degenerate" => {
                let (d, ord) = minimal_degree_bound(g);
                Recolorer::new(g, &ord, RecolorSetting::Degree { k, d })?.equalize(&a, &b)?.combined
            }
            "list" => {
                let lists = lists.clone().unwrap_or_else(|| ListAssignment::full(g.n(), k));
                let ord = list_ordering(g, &lists)?;
                Recolorer::new(g, &ord, RecolorSetting::List(lists))?.equalize(&a, &b)?.combined
            }
            "mad" => mad_equalize(g, k, epsilon, &a, &b)?.sequence,
            "treewidth" => tw_equalize(g, None, &a, &b, k)?.sequence,
            "delta" => delta_equalize(g, k, &a, &b)?.sequence,
            "chordal" => chordal_equalize(g, &peo(g)?, &a, &b, k)?,
            other => return Err(CoreError::PreconditionViolated(format!("unknown method {other:?}"))),
        })
    };
    py.detach(run).map(|s| to_moves(&s)).map_err(err)
}

/// Exhaustive Kempe-class summary of the proper `k`-colorings of `graph`.
#[pyclass(frozen, get_all, module = "kempe")]
struct OracleReport {
    num_colorings: usize,
    num_classes: usize,
    class_sizes: Vec<usize>,
    diameter_per_class: Vec<Option<usize>>,
    frozen: Vec<usize>,
}

#[pymethods]
impl OracleReport {
    fn __repr__(&self) -> String {
        format!("OracleReport(num_colorings={}, num_classes={})", self.num_colorings, self.num_classes)
    }
}

#[pyfunction]
#[pyo3(signature = (graph, k, max_colorings = Budget::default().max_colorings))]
fn oracle(py: Python<'_>, graph: &Graph, k: usize, max_colorings: usize) -> PyResult<OracleReport> {
    let budget = Budget { max_colorings, ..Budget::default() };
    let r = py.detach(|| build_reconf_with(&graph.inner, k, &budget).map(|rg| rg.report(&graph.inner))).map_err(err)?;
    Ok(OracleReport {
        num_colorings: r.num_colorings,
        num_classes: r.num_classes,
        class_sizes: r.class_sizes,
        diameter_per_class: r.diameter_per_class,
        frozen: r.frozen,
    })
}

/// Shortest Kempe path by breadth-first search, or `None` when the colorings are in different classes.
#[pyfunction]
#[pyo3(signature = (graph, k, start, target, max_nodes = 1_000_000))]
fn kempe_path(graph: &Graph, k: usize, start: &Coloring, target: &Coloring, max_nodes: usize) -> PyResult<Option<Vec<Move>>> {
    let seq = core_kempe_path(&graph.inner, k, &start.inner, &target.inner, max_nodes).map_err(err)?;
    Ok(seq.as_ref().map(to_moves))
}

#[pymodule]
fn kempe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("KempeError", m.py().get_type::<KempeError>())?;
    m.add_class::<Graph>()?;
    m.add_class::<Coloring>()?;
    m.add_class::<OracleReport>()?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(apply, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(recolor, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(kempe_path, m)?)?;
    Ok(())
}
