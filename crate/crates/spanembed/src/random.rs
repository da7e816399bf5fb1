//! Deterministic randomness: labeled seed streams and random-graph samplers.
//!
//! Every randomized routine takes a [`RandomSource`], a (seed, label) pair.
//! Deriving a child source appends to the label path; the actual generator is a
//! `ChaCha8Rng` seeded from an FNV-1a hash of seed and label. Two sources with
//! the same seed and label always produce bit-identical output, independent of
//! platform or thread interleaving; sibling labels give independent streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{ColoredGraph, Graph, Vertex};

/// 64-bit FNV-1a over the little-endian seed bytes followed by the label bytes.
fn fnv1a64(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in seed.to_le_bytes().into_iter().chain(label.bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// A reproducible, labeled stream of randomness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSource {
    seed: u64,
    label: String,
}

impl RandomSource {
    /// Root source with an empty label path.
    pub fn new(seed: u64) -> Self {
        RandomSource { seed, label: String::new() }
    }

    /// Child source for a named sub-task; labels accumulate as a `/`-path.
    pub fn derive(&self, label: &str) -> Self {
        let label = if self.label.is_empty() {
            label.to_string()
        } else {
            format!("{}/{}", self.label, label)
        };
        RandomSource { seed: self.seed, label }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The stream identifier this source seeds its generator with.
    pub fn stream_id(&self) -> u64 {
        fnv1a64(self.seed, &self.label)
    }

    /// A fresh generator positioned at the start of this source's stream.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.stream_id())
    }
}

fn check_probability(p: f64) {
    assert!(p.is_finite() && (0.0..=1.0).contains(&p), "probability {p} outside [0, 1]");
}

/// One Bernoulli(p) draw per pair (u, v), u < v, in ascending lexicographic
/// order of (u, v).
fn sample_edges(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u as Vertex, v as Vertex));
            }
        }
    }
    edges
}

/// One uniform color in `[1..=c]` per edge, in the edges' given order.
fn sample_colors(
    edges: &[(Vertex, Vertex)],
    c: u32,
    rng: &mut ChaCha8Rng,
) -> std::collections::HashMap<(Vertex, Vertex), u32> {
    edges.iter().map(|&e| (e, rng.random_range(1..=c))).collect()
}

/// Samples G(n, p): each pair independently an edge with probability `p`.
///
/// Pre: `p` in [0, 1] (checked by assertion; CLI validates at parse time).
pub fn gnp_generate(n: usize, p: f64, src: &RandomSource) -> Graph {
    check_probability(p);
    let mut rng = src.rng();
    let edges = sample_edges(n, p, &mut rng);
    Graph::from_edges(n, &edges).expect("sampled pairs are distinct and in range")
}

/// The split probability q with (1−q)² = 1−p, i.e. two independent G(n, q)
/// layers union to a G(n, p).
pub fn split_probability(p: f64) -> f64 {
    1.0 - (1.0 - p).sqrt()
}

/// Samples an independent pair (G1, G2), each G(n, q) with q = 1−√(1−p),
/// so G1 ∪ G2 is distributed as G(n, p).
///
/// Draw order: all pairs for G1 first, then all pairs for G2.
pub fn gnp_split_generate(n: usize, p: f64, src: &RandomSource) -> (Graph, Graph) {
    check_probability(p);
    let q = split_probability(p);
    let mut rng = src.rng();
    let e1 = sample_edges(n, q, &mut rng);
    let e2 = sample_edges(n, q, &mut rng);
    let g1 = Graph::from_edges(n, &e1).expect("sampled pairs are distinct and in range");
    let g2 = Graph::from_edges(n, &e2).expect("sampled pairs are distinct and in range");
    (g1, g2)
}

/// Samples the colored model: a G(n, p) whose edges get i.i.d. uniform colors
/// in `[1..=c]`. Edge draws come first, then colors in ascending edge order.
///
/// Pre: `p` in [0, 1], `c ≥ 1` (checked by assertion).
pub fn gcnp_generate(n: usize, p: f64, c: u32, src: &RandomSource) -> ColoredGraph {
    check_probability(p);
    assert!(c >= 1, "color count must be at least 1");
    let mut rng = src.rng();
    let edges = sample_edges(n, p, &mut rng);
    let colors = sample_colors(&edges, c, &mut rng);
    let base = Graph::from_edges(n, &edges).expect("sampled pairs are distinct and in range");
    ColoredGraph::from_parts(base, c, colors).expect("every edge was colored in range")
}

/// Colored analogue of the split: two independent colored G(n, q) layers with
/// q = 1−√(1−p), both colored uniformly from `[1..=c]`.
///
/// Draw order: G1 edges, G2 edges, G1 colors, G2 colors.
pub fn gcnp_split_generate(
    n: usize,
    p: f64,
    c: u32,
    src: &RandomSource,
) -> (ColoredGraph, ColoredGraph) {
    check_probability(p);
    assert!(c >= 1, "color count must be at least 1");
    let q = split_probability(p);
    let mut rng = src.rng();
    let e1 = sample_edges(n, q, &mut rng);
    let e2 = sample_edges(n, q, &mut rng);
    let c1 = sample_colors(&e1, c, &mut rng);
    let c2 = sample_colors(&e2, c, &mut rng);
    let g1 = Graph::from_edges(n, &e1).expect("sampled pairs are distinct and in range");
    let g2 = Graph::from_edges(n, &e2).expect("sampled pairs are distinct and in range");
    (
        ColoredGraph::from_parts(g1, c, c1).expect("every edge was colored in range"),
        ColoredGraph::from_parts(g2, c, c2).expect("every edge was colored in range"),
    )
}
