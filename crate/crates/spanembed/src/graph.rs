//! Simple undirected graphs on `0..n` plus the edge-colored variant.
//!
//! Graphs are immutable after construction: build one with [`Graph::from_edges`]
//! (validating) and share it freely across threads. Adjacency lists are kept
//! sorted so neighbor scans and membership tests are deterministic.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

/// Vertex identifier; vertices are always `0..n`.
pub type Vertex = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("color count must be at least 1")]
    InvalidColorCount,
    #[error("edge {{{u}, {v}}} has color {color} outside [1..{c}]")]
    ColorOutOfRange { u: Vertex, v: Vertex, color: u32, c: u32 },
    #[error("edge {{{0}, {1}}} has no color assigned")]
    MissingColor(Vertex, Vertex),
}

/// Undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates
    /// (in either orientation), and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v as usize >= n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                let dup = list.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
                let (u, w) = (v as Vertex, dup);
                return Err(GraphError::DuplicateEdge(u.min(w), u.max(w)));
            }
        }
        Ok(Graph { adj, m: edges.len() })
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut adj = vec![Vec::new(); n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    adj[u].push(v as Vertex);
                }
            }
        }
        Graph { adj, m: n * n.saturating_sub(1) / 2 }
    }

    /// Cycle 0–1–…–(n−1)–0; requires n ≥ 3.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> =
            (0..n).map(|i| (i as Vertex, ((i + 1) % n) as Vertex)).collect();
        Graph::from_edges(n, &edges).expect("cycle edges are valid")
    }

    /// Path 0–1–…–(n−1).
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| ((i - 1) as Vertex, i as Vertex)).collect();
        Graph::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as ordered pairs (u, v) with u < v, ascending lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as Vertex;
            list.iter().copied().filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// All vertices at distance ≤ `k` from `v` (including `v`), sorted.
    pub fn ball(&self, v: Vertex, k: usize) -> Vec<Vertex> {
        let mut seen = vec![false; self.n()];
        seen[v as usize] = true;
        let mut frontier = vec![v];
        let mut out = vec![v];
        for _ in 0..k {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in self.neighbors(x) {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        next.push(y);
                        out.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out.sort_unstable();
        out
    }

    /// BFS distance from `u` to `v`, giving up (None) beyond `cap`.
    pub fn distance_up_to(&self, u: Vertex, v: Vertex, cap: usize) -> Option<usize> {
        if u == v {
            return Some(0);
        }
        let mut seen = vec![false; self.n()];
        seen[u as usize] = true;
        let mut frontier = vec![u];
        for dist in 1..=cap {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in self.neighbors(x) {
                    if y == v {
                        return Some(dist);
                    }
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                return None;
            }
            frontier = next;
        }
        None
    }

    /// Number of neighbors of `v` inside the mask (induced degree).
    pub fn degree_within(&self, v: Vertex, mask: &[bool]) -> usize {
        self.neighbors(v).iter().filter(|&&w| mask[w as usize]).count()
    }

    /// Number of edges with both endpoints in `set`.
    pub fn induced_edge_count(&self, set: &[Vertex]) -> usize {
        let mut mask = vec![false; self.n()];
        for &v in set {
            mask[v as usize] = true;
        }
        let doubled: usize = set.iter().map(|&v| self.degree_within(v, &mask)).sum();
        doubled / 2
    }

    /// Sorted union of the neighborhoods of `set` (may intersect `set`).
    pub fn neighborhood_of_set(&self, set: &[Vertex]) -> Vec<Vertex> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for &v in set {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Graph whose every edge carries a color in `[1..=c]`.
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    base: Graph,
    c: u32,
    colors: HashMap<(Vertex, Vertex), u32>,
}

impl ColoredGraph {
    /// Validates that every edge of `base` has exactly one color in `[1..=c]`.
    pub fn from_parts(
        base: Graph,
        c: u32,
        colors: HashMap<(Vertex, Vertex), u32>,
    ) -> Result<Self, GraphError> {
        if c == 0 {
            return Err(GraphError::InvalidColorCount);
        }
        for (u, v) in base.edges() {
            match colors.get(&(u, v)) {
                None => return Err(GraphError::MissingColor(u, v)),
                Some(&col) if col == 0 || col > c => {
                    return Err(GraphError::ColorOutOfRange { u, v, color: col, c })
                }
                Some(_) => {}
            }
        }
        Ok(ColoredGraph { base, c, colors })
    }

    pub fn graph(&self) -> &Graph {
        &self.base
    }

    pub fn color_count(&self) -> u32 {
        self.c
    }

    /// Color of edge {u, v}, if the edge exists.
    pub fn color(&self, u: Vertex, v: Vertex) -> Option<u32> {
        let key = (u.min(v), u.max(v));
        self.colors.get(&key).copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.base.has_edge(u, v)
    }
}

// ==== edge-list file format ====================================================

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn malformed(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed { line: line, msg: msg.into() }
}

/// Writes the plain edge-list format: header `n m`, then one `u v` line per
/// edge with `u < v`, ascending.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Parses the plain edge-list format produced by [`write_edge_list`].
pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| malformed(1, "missing header"))?;
    let mut it = header.split_whitespace();
    let n: usize = next_field(&mut it, 1, "n")?;
    let m: usize = next_field(&mut it, 1, "m")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| malformed(m + 1, format!("expected {m} edge lines")))?;
        let mut it = line.split_whitespace();
        let u: Vertex = next_field(&mut it, idx + 1, "u")?;
        let v: Vertex = next_field(&mut it, idx + 1, "v")?;
        if u >= v {
            return Err(malformed(idx + 1, format!("edge must satisfy u < v, got {u} {v}")));
        }
        edges.push((u, v));
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// Writes the colored edge-list format: `n m`, `c <count>`, then `u v color`.
pub fn write_colored_edge_list(g: &ColoredGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.graph().n(), g.graph().edge_count()).unwrap();
    writeln!(out, "c {}", g.color_count()).unwrap();
    for (u, v) in g.graph().edges() {
        let col = g.color(u, v).expect("every edge is colored");
        writeln!(out, "{u} {v} {col}").unwrap();
    }
    out
}

/// Parses the colored edge-list format produced by [`write_colored_edge_list`].
pub fn parse_colored_edge_list(text: &str) -> Result<ColoredGraph, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| malformed(1, "missing header"))?;
    let mut it = header.split_whitespace();
    let n: usize = next_field(&mut it, 1, "n")?;
    let m: usize = next_field(&mut it, 1, "m")?;
    let (_, cline) = lines.next().ok_or_else(|| malformed(2, "missing color header"))?;
    let mut it = cline.split_whitespace();
    match it.next() {
        Some("c") => {}
        _ => return Err(malformed(2, "expected color header `c <count>`")),
    }
    let c: u32 = next_field(&mut it, 2, "count")?;
    let mut edges = Vec::with_capacity(m);
    let mut colors = HashMap::with_capacity(m);
    for _ in 0..m {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| malformed(m + 2, format!("expected {m} edge lines")))?;
        let mut it = line.split_whitespace();
        let u: Vertex = next_field(&mut it, idx + 1, "u")?;
        let v: Vertex = next_field(&mut it, idx + 1, "v")?;
        let col: u32 = next_field(&mut it, idx + 1, "color")?;
        if u >= v {
            return Err(malformed(idx + 1, format!("edge must satisfy u < v, got {u} {v}")));
        }
        edges.push((u, v));
        colors.insert((u, v), col);
    }
    let base = Graph::from_edges(n, &edges)?;
    Ok(ColoredGraph::from_parts(base, c, colors)?)
}

fn next_field<T: std::str::FromStr>(
    it: &mut std::str::SplitWhitespace<'_>,
    line: usize,
    what: &str,
) -> Result<T, FormatError> {
    it.next()
        .ok_or_else(|| malformed(line, format!("missing field {what}")))?
        .parse::<T>()
        .map_err(|_| malformed(line, format!("bad field {what}")))
}

/// Reads a plain edge list from disk.
pub fn load_edge_list(path: &Path) -> Result<Graph, FormatError> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Writes a plain edge list to disk.
pub fn save_edge_list(path: &Path, g: &Graph) -> Result<(), FormatError> {
    Ok(std::fs::write(path, write_edge_list(g))?)
}
