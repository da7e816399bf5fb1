//! Python bindings for the spanembed toolkit.
//!
//! Exposes the graph types, the target-family generators, the random host
//! models, both embedding pipelines with their verifiers, and the experiment
//! harness. All randomness is seeded: the same arguments always produce the
//! same result.

use std::collections::HashMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use spanembed::density;
use spanembed::embed;
use spanembed::girth::{self, Girth};
use spanembed::graph;
use spanembed::hostplan::build_host_plan;
use spanembed::partition::partition_general;
use spanembed::rainbow;
use spanembed::random::{gcnp_split_generate, gnp_generate, RandomSource};
use spanembed::sweep::{self, host_epsilon, parse_eps, ExperimentConfig};
use spanembed::target::{generate_target, TargetFamily};

fn val_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn run_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// Simple undirected graph on vertices 0..n.
#[pyclass(name = "Graph", skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: graph::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(u32, u32)>) -> PyResult<Self> {
        let inner = graph::Graph::from_edges(n, &edges).map_err(val_err)?;
        Ok(PyGraph { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn degree(&self, v: u32) -> PyResult<usize> {
        self.check_vertex(v)?;
        Ok(self.inner.degree(v))
    }

    fn neighbors(&self, v: u32) -> PyResult<Vec<u32>> {
        self.check_vertex(v)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn has_edge(&self, u: u32, v: u32) -> bool {
        (u as usize) < self.inner.n() && (v as usize) < self.inner.n() && self.inner.has_edge(u, v)
    }

    /// All edges as (u, v) pairs with u < v, in ascending order.
    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edges().collect()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

impl PyGraph {
    fn check_vertex(&self, v: u32) -> PyResult<()> {
        if (v as usize) < self.inner.n() {
            Ok(())
        } else {
            Err(val_err(format!("vertex {v} out of range for n = {}", self.inner.n())))
        }
    }
}

/// Graph whose every edge carries a color in 1..=colors.
#[pyclass(name = "ColoredGraph", skip_from_py_object)]
#[derive(Clone)]
struct PyColoredGraph {
    inner: graph::ColoredGraph,
}

#[pymethods]
impl PyColoredGraph {
    #[new]
    fn new(
        graph: &PyGraph,
        colors: u32,
        edge_colors: HashMap<(u32, u32), u32>,
    ) -> PyResult<Self> {
        let inner = graph::ColoredGraph::from_parts(graph.inner.clone(), colors, edge_colors)
            .map_err(val_err)?;
        Ok(PyColoredGraph { inner })
    }

    #[getter]
    fn color_count(&self) -> u32 {
        self.inner.color_count()
    }

    /// The uncolored base graph.
    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph { inner: self.inner.graph().clone() }
    }

    /// Color of edge {u, v}, or None if the edge is absent.
    fn color(&self, u: u32, v: u32) -> Option<u32> {
        self.inner.color(u, v)
    }

    fn has_edge(&self, u: u32, v: u32) -> bool {
        self.inner.has_edge(u, v)
    }

    fn __repr__(&self) -> String {
        format!(
            "ColoredGraph(n={}, edges={}, colors={})",
            self.inner.graph().n(),
            self.inner.graph().edge_count(),
            self.inner.color_count()
        )
    }
}

/// Injective vertex map from a pattern graph into a host graph.
#[pyclass(name = "Embedding")]
struct PyEmbedding {
    inner: embed::Embedding,
}

#[pymethods]
impl PyEmbedding {
    /// Host image of each pattern vertex, indexed by pattern vertex.
    #[getter]
    fn map(&self) -> Vec<u32> {
        self.inner.map().to_vec()
    }

    fn image(&self, v: u32) -> PyResult<u32> {
        if (v as usize) < self.inner.map().len() {
            Ok(self.inner.image(v))
        } else {
            Err(val_err(format!("vertex {v} out of range")))
        }
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let inner = embed::Embedding::from_text(text).map_err(val_err)?;
        Ok(PyEmbedding { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.map().len()
    }

    fn __repr__(&self) -> String {
        format!("Embedding(n={})", self.inner.map().len())
    }
}

/// Generates one pattern graph of a named family ("spanning_tree",
/// "bounded_density", or "girth7_subdivided") with max degree `delta` and
/// density bound `d`, deterministically per seed.
#[pyfunction]
fn target(family: &str, n: usize, delta: usize, d: usize, seed: u64) -> PyResult<PyGraph> {
    let fam = TargetFamily::parse(family).ok_or_else(|| {
        val_err(format!(
            "unknown family {family:?} (expected spanning_tree, bounded_density, \
             or girth7_subdivided)"
        ))
    })?;
    let src = RandomSource::new(seed).derive("target");
    let inner = generate_target(fam, n, delta, d, &src).map_err(val_err)?;
    Ok(PyGraph { inner })
}

/// A random graph in which each of the n·(n−1)/2 possible edges appears
/// independently with probability p, deterministically per seed.
#[pyfunction]
fn gnp(n: usize, p: f64, seed: u64) -> PyResult<PyGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(val_err(format!("p = {p} outside [0, 1]")));
    }
    let src = RandomSource::new(seed).derive("host");
    Ok(PyGraph { inner: gnp_generate(n, p, &src) })
}

/// Two independent colored random graphs whose union is distributed as a
/// colored G(n, p): each returned graph has edge probability
/// q = 1 − sqrt(1 − p) and uniform edge colors in 1..=colors.
#[pyfunction]
fn colored_gnp_pair(
    n: usize,
    p: f64,
    colors: u32,
    seed: u64,
) -> PyResult<(PyColoredGraph, PyColoredGraph)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(val_err(format!("p = {p} outside [0, 1]")));
    }
    if colors == 0 {
        return Err(val_err("colors must be at least 1"));
    }
    let src = RandomSource::new(seed).derive("hosts");
    let (g1, g2) = gcnp_split_generate(n, p, colors, &src);
    Ok((PyColoredGraph { inner: g1 }, PyColoredGraph { inner: g2 }))
}

/// Maximum subgraph density max over nonempty S of 2·e(S)/|S|, as an exact
/// (numerator, denominator) pair.
#[pyfunction]
fn max_density(graph: &PyGraph) -> (i64, i64) {
    let r = density::max_density(&graph.inner);
    (*r.numer(), *r.denom())
}

/// Length of a shortest cycle, or None if the graph has no cycle.
#[pyfunction]
fn graph_girth(graph: &PyGraph) -> Option<usize> {
    match girth::girth(&graph.inner) {
        Girth::Finite(g) => Some(g),
        Girth::Infinite => None,
    }
}

/// Embeds a bounded-degree, bounded-density pattern into a host graph on the
/// same vertex count: partitions the pattern into sparse layers, carves the
/// host into matching slices with an absorbing clique reserve, then embeds
/// layer by layer. `eps` is a rational like "1/10" controlling the deepest
/// layer's size. Raises RuntimeError when the attempt fails.
#[pyfunction]
fn embed_spanning(
    pattern: &PyGraph,
    host: &PyGraph,
    delta: usize,
    d: usize,
    eps: &str,
    seed: u64,
) -> PyResult<PyEmbedding> {
    let eps = parse_eps(eps).map_err(val_err)?;
    let src = RandomSource::new(seed);
    let part = partition_general(&pattern.inner, delta, d, eps).map_err(run_err)?;
    let eps_host = host_epsilon(eps, part.effective_depth(), host.inner.n());
    let plan = build_host_plan(
        &host.inner,
        part.effective_depth(),
        eps_host,
        d,
        &src.derive("plan"),
    )
    .map_err(run_err)?;
    let inner = embed::embed(&pattern.inner, &part, &host.inner, &plan, &src.derive("embed"))
        .map_err(run_err)?;
    Ok(PyEmbedding { inner })
}

/// Checks that `embedding` maps `pattern` injectively into `host` with every
/// pattern edge landing on a host edge. Raises ValueError on any defect.
#[pyfunction]
fn verify_embedding(pattern: &PyGraph, host: &PyGraph, embedding: &PyEmbedding) -> PyResult<()> {
    embed::verify_embedding(&pattern.inner, &host.inner, &embedding.inner).map_err(val_err)
}

/// Embeds `pattern` into the union of two colored random graphs so that every
/// pattern edge wears a distinct color: a deterministic batch process places
/// all but a small reserved tail using the first graph, then a random k-out
/// matching finishes the tail using the second. Raises RuntimeError when the
/// process stalls or the final matching fails.
#[pyfunction]
fn rainbow_embed(
    pattern: &PyGraph,
    delta: usize,
    d: usize,
    alpha: f64,
    g1: &PyColoredGraph,
    g2: &PyColoredGraph,
    seed: u64,
) -> PyResult<PyEmbedding> {
    let src = RandomSource::new(seed).derive("tail");
    let inner =
        rainbow::rainbow_embed(&pattern.inner, delta, d, alpha, &g1.inner, &g2.inner, &src)
            .map_err(run_err)?;
    Ok(PyEmbedding { inner })
}

/// Checks that `embedding` is a rainbow copy of `pattern` in the union of the
/// two colored graphs: a valid embedding whose edge colors are pairwise
/// distinct. Raises ValueError on any defect.
#[pyfunction]
fn verify_rainbow(
    pattern: &PyGraph,
    g1: &PyColoredGraph,
    g2: &PyColoredGraph,
    embedding: &PyEmbedding,
) -> PyResult<()> {
    rainbow::verify_rainbow(&pattern.inner, &g1.inner, &g2.inner, &embedding.inner)
        .map_err(val_err)
}

/// Text form of a rainbow embedding: "n <count>" then one line per pattern
/// vertex with its host image and the colors of its edges to lower-numbered
/// neighbors.
#[pyfunction]
fn rainbow_text(
    pattern: &PyGraph,
    g1: &PyColoredGraph,
    g2: &PyColoredGraph,
    embedding: &PyEmbedding,
) -> String {
    rainbow::rainbow_to_text(&pattern.inner, &g1.inner, &g2.inner, &embedding.inner)
}

/// Runs a full experiment sweep from a JSON configuration (the same format
/// the CLI accepts via --config) and returns the result table as CSV. The
/// output is byte-identical across runs of the same configuration.
#[pyfunction]
fn run_sweep(config_json: &str) -> PyResult<String> {
    let cfg: ExperimentConfig = serde_json::from_str(config_json).map_err(val_err)?;
    cfg.validate().map_err(val_err)?;
    let records = sweep::run_sweep(&cfg).map_err(run_err)?;
    Ok(sweep::write_csv(&records))
}

#[pymodule]
fn spanembed_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyColoredGraph>()?;
    m.add_class::<PyEmbedding>()?;
    m.add_function(wrap_pyfunction!(target, m)?)?;
    m.add_function(wrap_pyfunction!(gnp, m)?)?;
    m.add_function(wrap_pyfunction!(colored_gnp_pair, m)?)?;
    m.add_function(wrap_pyfunction!(max_density, m)?)?;
    m.add_function(wrap_pyfunction!(graph_girth, m)?)?;
    m.add_function(wrap_pyfunction!(embed_spanning, m)?)?;
    m.add_function(wrap_pyfunction!(verify_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(rainbow_embed, m)?)?;
    m.add_function(wrap_pyfunction!(verify_rainbow, m)?)?;
    m.add_function(wrap_pyfunction!(rainbow_text, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
