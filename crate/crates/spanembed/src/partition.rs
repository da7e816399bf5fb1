//! Layered partitions of bounded-density targets.
//!
//! A layered partition splits V(H) into W_0 ∪ W_1 ∪ … ∪ W_t so that the top
//! layer W_t has exactly ⌊εn⌋ vertices and is 3-independent, W_0 = N_H(W_t)
//! re-attaches it, every middle layer is 2-independent, and every vertex has
//! few neighbors in lower layers (the back-degree cap). The embedding stage
//! consumes layers bottom-up, so the cap bounds how many already-placed
//! neighbors each vertex must connect to.
//!
//! Two constructors: the general one peels 2-independent low-degree sets from
//! the remainder (cap 2d); the girth ≥ 7 one exploits the absence of short
//! cycles to keep the cap at d, alternating between candidates of degree
//! ≤ d−1 and candidates outside X = N(N(W_t)). Construction is deterministic:
//! greedy choices always take the lowest vertex index.
//!
//! Middle layers are built 2-independent with distances measured in the FULL
//! graph H, not just the shrinking remainder: the validator (and the matching
//! stage) measure distances in H, and remainder-only independence would admit
//! pairs joined through an already-peeled middle vertex.
//!
//! Nominal depths (⌈4Δ⁶ ln n⌉+1 and ⌈16d²Δ² ln n⌉+1) leave almost all layers
//! empty at practical sizes, so the partition stores the nonempty peels only,
//! along with the effective depth t* = number of nonempty middle layers;
//! downstream host planning sizes its slices by t*.

use num_rational::Ratio;
use thiserror::Error;

use crate::density::max_density;
use crate::girth::{girth, shortest_cycle, Girth};
use crate::graph::{FormatError, Graph, Vertex};
use crate::indep::{k_independent_in_subset, k_independent_low_degree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parameter {name} = {value} below minimum {min}")]
    ParamTooSmall { name: &'static str, value: usize, min: usize },
    #[error("epsilon {epsilon} gives ⌊εn⌋ < 1 at n = {n} (or lies outside (0,1))")]
    EpsilonDegenerate { epsilon: Ratio<i64>, n: usize },
    #[error("vertex {vertex} has degree {degree}, above the bound {bound}")]
    MaxDegreeExceeded { vertex: Vertex, degree: usize, bound: usize },
    #[error("maximum density {density} exceeds the bound {bound}")]
    DensityExceeded { density: Ratio<i64>, bound: usize },
    #[error("girth below 7: found a cycle of length {}", cycle.len())]
    GirthTooSmall { cycle: Vec<Vertex> },
    #[error("top layer needs {required} vertices but only {achievable} are available")]
    WtTooSmall { required: usize, achievable: usize },
    #[error("peeling stalled on a remainder of {layer_size} vertices: needed {required}, found {achieved}")]
    PeelStalled { layer_size: usize, required: usize, achieved: usize },
}

/// A layered partition W_0 ∪ W_1 ∪ … ∪ W_{t*} ∪ W_t of some graph's vertices.
///
/// Stored compactly: `layers[0]` is W_0, `layers[1..=t*]` are the nonempty
/// middle layers in embedding order (lowest first), and the final entry is the
/// top layer W_t. Empty middle layers implied by the nominal depth are elided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredPartition {
    layers: Vec<Vec<Vertex>>,
    nominal_depth: usize,
    epsilon: Ratio<i64>,
    cap: usize,
}

impl LayeredPartition {
    pub fn w0(&self) -> &[Vertex] {
        &self.layers[0]
    }

    pub fn wt(&self) -> &[Vertex] {
        self.layers.last().expect("at least two layers")
    }

    /// Middle layers in embedding order (W_1 first).
    pub fn peels(&self) -> &[Vec<Vertex>] {
        &self.layers[1..self.layers.len() - 1]
    }

    /// All stored layers: W_0, then middles, then W_t.
    pub fn layers(&self) -> &[Vec<Vertex>] {
        &self.layers
    }

    /// Number of nonempty middle layers (t*).
    pub fn effective_depth(&self) -> usize {
        self.layers.len() - 2
    }

    /// The depth the construction formula prescribes before eliding empties.
    pub fn nominal_depth(&self) -> usize {
        self.nominal_depth
    }

    pub fn epsilon(&self) -> Ratio<i64> {
        self.epsilon
    }

    /// Back-degree cap: max allowed neighbors in strictly lower layers.
    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Total number of vertices covered.
    pub fn covered(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Text form: header `t <nominal> t* <effective> eps <p/q> d <cap>`, then
    /// one `W<i>: v v …` line per stored layer (the last line is W_t).
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        writeln!(
            out,
            "t {} t* {} eps {}/{} d {}",
            self.nominal_depth,
            self.effective_depth(),
            self.epsilon.numer(),
            self.epsilon.denom(),
            self.cap
        )
        .unwrap();
        for (i, layer) in self.layers.iter().enumerate() {
            let items: Vec<String> = layer.iter().map(|v| v.to_string()).collect();
            if items.is_empty() {
                writeln!(out, "W{i}:").unwrap();
            } else {
                writeln!(out, "W{i}: {}", items.join(" ")).unwrap();
            }
        }
        out
    }

    /// Parses the format produced by [`Self::to_text`].
    pub fn from_text(text: &str) -> Result<Self, FormatError> {
        let bad = |line: usize, msg: &str| FormatError::Malformed { line, msg: msg.into() };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() != 8
            || tokens[0] != "t"
            || tokens[2] != "t*"
            || tokens[4] != "eps"
            || tokens[6] != "d"
        {
            return Err(bad(1, "expected `t <n> t* <n> eps <p/q> d <n>`"));
        }
        let nominal: usize = tokens[1].parse().map_err(|_| bad(1, "bad nominal depth"))?;
        let effective: usize = tokens[3].parse().map_err(|_| bad(1, "bad effective depth"))?;
        let (p, q) = tokens[5]
            .split_once('/')
            .ok_or_else(|| bad(1, "epsilon must be written p/q"))?;
        let p: i64 = p.parse().map_err(|_| bad(1, "bad epsilon numerator"))?;
        let q: i64 = q.parse().map_err(|_| bad(1, "bad epsilon denominator"))?;
        if q <= 0 {
            return Err(bad(1, "epsilon denominator must be positive"));
        }
        let cap: usize = tokens[7].parse().map_err(|_| bad(1, "bad cap"))?;
        let mut layers = Vec::with_capacity(effective + 2);
        for i in 0..effective + 2 {
            let line_no = i + 2;
            let line = lines.next().ok_or_else(|| bad(line_no, "missing layer line"))?;
            let rest = line
                .strip_prefix(&format!("W{i}:"))
                .ok_or_else(|| bad(line_no, "layer line must start with W<i>:"))?;
            let mut layer = Vec::new();
            for tok in rest.split_whitespace() {
                layer.push(tok.parse::<Vertex>().map_err(|_| bad(line_no, "bad vertex"))?);
            }
            layers.push(layer);
        }
        Ok(LayeredPartition {
            layers,
            nominal_depth: nominal,
            epsilon: Ratio::new(p, q),
            cap,
        })
    }
}

fn check_params(pairs: &[(&'static str, usize, usize)]) -> Result<(), PartitionError> {
    for &(name, value, min) in pairs {
        if value < min {
            return Err(PartitionError::ParamTooSmall { name, value, min });
        }
    }
    Ok(())
}

fn check_shape(h: &Graph, delta: usize, d: usize) -> Result<(), PartitionError> {
    for v in 0..h.n() as Vertex {
        if h.degree(v) > delta {
            return Err(PartitionError::MaxDegreeExceeded {
                vertex: v,
                degree: h.degree(v),
                bound: delta,
            });
        }
    }
    let density = max_density(h);
    if density > Ratio::from_integer(d as i64) {
        return Err(PartitionError::DensityExceeded { density, bound: d });
    }
    Ok(())
}

fn wt_size(epsilon: Ratio<i64>, n: usize) -> Result<usize, PartitionError> {
    let degenerate = PartitionError::EpsilonDegenerate { epsilon, n };
    if epsilon <= Ratio::from_integer(0) || epsilon >= Ratio::from_integer(1) {
        return Err(degenerate);
    }
    let size = (epsilon * Ratio::from_integer(n as i64)).floor().to_integer();
    if size < 1 {
        return Err(degenerate);
    }
    Ok(size as usize)
}

/// Low-degree survivors of the not-yet-peeled remainder: vertices whose degree
/// inside `alive` is at most `cap`, ascending.
fn low_degree_in_remainder(h: &Graph, alive: &[bool], cap: usize) -> Vec<Vertex> {
    (0..h.n() as Vertex)
        .filter(|&v| alive[v as usize] && h.degree_within(v, alive) <= cap)
        .collect()
}

fn remove_all(alive: &mut [bool], set: &[Vertex]) {
    for &v in set {
        alive[v as usize] = false;
    }
}

fn nominal_depth(scale: f64, n: usize) -> usize {
    (scale * (n as f64).ln()).ceil() as usize + 1
}

/// Layered partition of a max-degree ≤ Δ, density ≤ d target; back-degree cap
/// 2d, nominal depth ⌈4Δ⁶ ln n⌉ + 1.
///
/// The top layer is the first ⌊εn⌋ vertices of a greedy 4-independent set
/// drawn from degree-≤-d vertices; middle layers are greedily peeled
/// 2-independent sets of vertices with remainder-degree ≤ d. Each such vertex
/// has ≤ d neighbors still unpeeled and ≤ d in W_0 (more would force two top
/// vertices within distance 4), hence the 2d cap.
pub fn partition_general(
    h: &Graph,
    delta: usize,
    d: usize,
    epsilon: Ratio<i64>,
) -> Result<LayeredPartition, PartitionError> {
    check_params(&[("delta", delta, 2), ("d", d, 2)])?;
    check_shape(h, delta, d)?;
    let n = h.n();
    let required = wt_size(epsilon, n)?;
    let pool = k_independent_low_degree(h, d, 4)
        .expect("density ≤ d forces 2|E| ≤ dn and a nonempty low-degree set");
    if pool.len() < required {
        return Err(PartitionError::WtTooSmall { required, achievable: pool.len() });
    }
    let wt: Vec<Vertex> = pool[..required].to_vec();
    let w0 = h.neighborhood_of_set(&wt);
    let mut alive = vec![true; n];
    remove_all(&mut alive, &wt);
    remove_all(&mut alive, &w0);
    let mut peels_peel_order: Vec<Vec<Vertex>> = Vec::new();
    loop {
        let remaining = alive.iter().filter(|&&a| a).count();
        if remaining == 0 {
            break;
        }
        let candidates = low_degree_in_remainder(h, &alive, d);
        let picked = k_independent_in_subset(h, &candidates, 2, delta)
            .expect("candidate degrees are bounded by the max-degree check");
        if picked.is_empty() {
            return Err(PartitionError::PeelStalled {
                layer_size: remaining,
                required: 1,
                achieved: 0,
            });
        }
        remove_all(&mut alive, &picked);
        peels_peel_order.push(picked);
    }
    let mut layers = Vec::with_capacity(peels_peel_order.len() + 2);
    layers.push(w0);
    layers.extend(peels_peel_order.into_iter().rev());
    layers.push(wt);
    Ok(LayeredPartition {
        layers,
        nominal_depth: nominal_depth(4.0 * (delta as f64).powi(6), n),
        epsilon,
        cap: 2 * d,
    })
}

/// Layered partition of a girth ≥ 7 target; back-degree cap d (not 2d),
/// nominal depth ⌈16d²Δ² ln n⌉ + 1.
///
/// The top layer comes from a 6-independent low-degree set. Each middle layer
/// tries candidates of remainder-degree ≤ d−1 first; if the greedy
/// 2-independent set among them reaches a γ = 1/(8(d+1)(d−1)Δ²) fraction of
/// the remainder it is taken (≤ d−1 unpeeled neighbors plus at most one in
/// W_0 — girth ≥ 7 forbids more). Otherwise candidates of degree ≤ d outside
/// X = N(N(W_t)) are used, which have no W_0 neighbors at all.
pub fn partition_girth7(
    h: &Graph,
    delta: usize,
    d: usize,
    epsilon: Ratio<i64>,
) -> Result<LayeredPartition, PartitionError> {
    check_params(&[("delta", delta, 1), ("d", d, 2)])?;
    if girth(h) < Girth::Finite(7) {
        let cycle = shortest_cycle(h).expect("finite girth means a cycle exists");
        return Err(PartitionError::GirthTooSmall { cycle });
    }
    check_shape(h, delta, d)?;
    let n = h.n();
    let required = wt_size(epsilon, n)?;
    let pool = k_independent_low_degree(h, d, 6)
        .expect("density ≤ d forces 2|E| ≤ dn and a nonempty low-degree set");
    if pool.len() < required {
        return Err(PartitionError::WtTooSmall { required, achievable: pool.len() });
    }
    let wt: Vec<Vertex> = pool[..required].to_vec();
    let w0 = h.neighborhood_of_set(&wt);
    let x = h.neighborhood_of_set(&w0);
    let mut in_wt = vec![false; n];
    for &v in &wt {
        in_wt[v as usize] = true;
    }
    let mut in_w0 = vec![false; n];
    for &v in &w0 {
        in_w0[v as usize] = true;
    }
    let mut in_x = vec![false; n];
    for &v in &x {
        in_x[v as usize] = true;
    }
    // Girth ≥ 7 plus a 6-independent top layer force ≤ 1 neighbor in W_0 for
    // everything below the top: two W_0-neighbors would close a short cycle
    // or join two top vertices by a path of length ≤ 4.
    for v in 0..n as Vertex {
        if !in_wt[v as usize] {
            let w0_neighbors = h.degree_within(v, &in_w0);
            assert!(
                w0_neighbors <= 1,
                "vertex {v} has {w0_neighbors} neighbors in W_0, impossible at girth ≥ 7"
            );
        }
    }
    let mut alive = vec![true; n];
    remove_all(&mut alive, &wt);
    remove_all(&mut alive, &w0);
    // |U| ≥ γ·n_i compared exactly: |U| · 8(d+1)(d−1)Δ² ≥ n_i.
    let gamma_denom = 8 * (d + 1) * (d - 1) * delta * delta;
    let mut peels_peel_order: Vec<Vec<Vertex>> = Vec::new();
    loop {
        let remaining = alive.iter().filter(|&&a| a).count();
        if remaining == 0 {
            break;
        }
        let quota_met = |set: &[Vertex]| set.len() * gamma_denom >= remaining;
        let low = low_degree_in_remainder(h, &alive, d - 1);
        let first_try = k_independent_in_subset(h, &low, 2, delta)
            .expect("candidate degrees are bounded by the max-degree check");
        let picked = if quota_met(&first_try) {
            first_try
        } else {
            let outside_x: Vec<Vertex> = low_degree_in_remainder(h, &alive, d)
                .into_iter()
                .filter(|&v| !in_x[v as usize])
                .collect();
            let second_try = k_independent_in_subset(h, &outside_x, 2, delta)
                .expect("candidate degrees are bounded by the max-degree check");
            if !quota_met(&second_try) {
                return Err(PartitionError::PeelStalled {
                    layer_size: remaining,
                    required: remaining.div_ceil(gamma_denom).max(1),
                    achieved: first_try.len().max(second_try.len()),
                });
            }
            second_try
        };
        remove_all(&mut alive, &picked);
        peels_peel_order.push(picked);
    }
    let mut layers = Vec::with_capacity(peels_peel_order.len() + 2);
    layers.push(w0);
    layers.extend(peels_peel_order.into_iter().rev());
    layers.push(wt);
    Ok(LayeredPartition {
        layers,
        nominal_depth: nominal_depth(16.0 * (d * d * delta * delta) as f64, n),
        epsilon,
        cap: d,
    })
}

// ==== independent validation ===================================================

/// One concrete reason a property failed; layer indices refer to the stored
/// layer list (0 = W_0, last = W_t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyFailure {
    /// A vertex covered `appearances` times (0 = missed, ≥ 2 = duplicated).
    Coverage { vertex: Vertex, appearances: usize },
    WtSize { actual: usize, required: usize },
    /// `vertex` is in W_0 xor in N(W_t).
    W0Mismatch { vertex: Vertex, expected_in_w0: bool },
    /// Two same-layer vertices closer than the layer's independence radius.
    TooClose { layer: usize, u: Vertex, v: Vertex, distance: usize },
    BackDegree { layer: usize, vertex: Vertex, count: usize, cap: usize },
}

/// Outcome of re-checking the five partition properties, each independently
/// of how the partition was built. `None` means the property holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    /// (i): layers partition V(H) and |W_t| = ⌊εn⌋.
    pub partition_and_size: Option<PropertyFailure>,
    /// (ii): W_0 = N_H(W_t).
    pub w0_is_neighborhood: Option<PropertyFailure>,
    /// (iii): W_t is 3-independent (pairwise distance ≥ 4).
    pub wt_independent: Option<PropertyFailure>,
    /// (iv): every middle layer is 2-independent (pairwise distance ≥ 3).
    pub middles_independent: Option<PropertyFailure>,
    /// (v): every vertex above W_0 has ≤ cap neighbors in lower layers.
    pub back_degree: Option<PropertyFailure>,
}

impl PartitionReport {
    pub fn passes(&self) -> bool {
        self.partition_and_size.is_none()
            && self.w0_is_neighborhood.is_none()
            && self.wt_independent.is_none()
            && self.middles_independent.is_none()
            && self.back_degree.is_none()
    }

    pub fn failures(&self) -> Vec<&PropertyFailure> {
        [
            &self.partition_and_size,
            &self.w0_is_neighborhood,
            &self.wt_independent,
            &self.middles_independent,
            &self.back_degree,
        ]
        .into_iter()
        .flatten()
        .collect()
    }
}

fn layer_independent(
    h: &Graph,
    layer_idx: usize,
    layer: &[Vertex],
    radius: usize,
) -> Option<PropertyFailure> {
    let members: std::collections::HashSet<Vertex> = layer.iter().copied().collect();
    for &v in layer {
        for u in h.ball(v, radius) {
            if u != v && members.contains(&u) {
                let distance = h
                    .distance_up_to(v, u, radius)
                    .expect("u was found inside the radius ball of v");
                return Some(PropertyFailure::TooClose { layer: layer_idx, u: v, v: u, distance });
            }
        }
    }
    None
}

/// Re-checks all five layered-partition properties by fresh BFS distance and
/// neighbor counts, trusting nothing about how `p` was produced.
pub fn validate_partition(h: &Graph, p: &LayeredPartition) -> PartitionReport {
    let n = h.n();
    let layers = p.layers();
    let last = layers.len() - 1;

    let partition_and_size = (|| {
        let mut count = vec![0usize; n];
        for layer in layers {
            for &v in layer {
                if (v as usize) < n {
                    count[v as usize] += 1;
                } else {
                    return Some(PropertyFailure::Coverage { vertex: v, appearances: 1 });
                }
            }
        }
        if let Some(v) = (0..n).find(|&v| count[v] != 1) {
            return Some(PropertyFailure::Coverage {
                vertex: v as Vertex,
                appearances: count[v],
            });
        }
        let required = (p.epsilon() * Ratio::from_integer(n as i64)).floor().to_integer();
        if p.wt().len() as i64 != required {
            return Some(PropertyFailure::WtSize {
                actual: p.wt().len(),
                required: required.max(0) as usize,
            });
        }
        None
    })();

    let w0_is_neighborhood = (|| {
        let expected = h.neighborhood_of_set(p.wt());
        let actual: std::collections::HashSet<Vertex> = p.w0().iter().copied().collect();
        for &v in &expected {
            if !actual.contains(&v) {
                return Some(PropertyFailure::W0Mismatch { vertex: v, expected_in_w0: true });
            }
        }
        let expected_set: std::collections::HashSet<Vertex> = expected.into_iter().collect();
        for &v in p.w0() {
            if !expected_set.contains(&v) {
                return Some(PropertyFailure::W0Mismatch { vertex: v, expected_in_w0: false });
            }
        }
        None
    })();

    let wt_independent = layer_independent(h, last, p.wt(), 3);

    let middles_independent = (1..last)
        .find_map(|i| layer_independent(h, i, &layers[i], 2));

    let back_degree = (|| {
        let mut lower = vec![false; n];
        for &v in p.w0() {
            lower[v as usize] = true;
        }
        for (idx, layer) in layers.iter().enumerate().skip(1) {
            for &v in layer {
                let count = h.degree_within(v, &lower);
                if count > p.cap() {
                    return Some(PropertyFailure::BackDegree {
                        layer: idx,
                        vertex: v,
                        count,
                        cap: p.cap(),
                    });
                }
            }
            for &v in layer {
                lower[v as usize] = true;
            }
        }
        None
    })();

    PartitionReport {
        partition_and_size,
        w0_is_neighborhood,
        wt_independent,
        middles_independent,
        back_degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(p: i64, q: i64) -> Ratio<i64> {
        Ratio::new(p, q)
    }

    #[test]
    fn empty_graph_partitions_into_one_peel() {
        let h = Graph::empty(10);
        let p = partition_general(&h, 2, 2, ratio(1, 10)).unwrap();
        assert_eq!(p.wt(), &[0]);
        assert!(p.w0().is_empty());
        assert_eq!(p.effective_depth(), 1);
        assert_eq!(p.peels()[0], (1..10).collect::<Vec<_>>());
        assert!(validate_partition(&h, &p).passes());
    }

    #[test]
    fn path_ten_general_frozen() {
        let h = Graph::path(10);
        let p = partition_general(&h, 2, 2, ratio(1, 10)).unwrap();
        assert_eq!(p.cap(), 4);
        assert_eq!(
            p.layers(),
            &[vec![1], vec![4, 7], vec![3, 6, 9], vec![2, 5, 8], vec![0]]
        );
        assert!(validate_partition(&h, &p).passes());
        // Deterministic: same partition every run.
        assert_eq!(p, partition_general(&h, 2, 2, ratio(1, 10)).unwrap());
    }

    #[test]
    fn single_edge_has_no_peels() {
        let h = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let p = partition_general(&h, 2, 2, ratio(1, 2)).unwrap();
        assert_eq!(p.effective_depth(), 0);
        assert_eq!(p.layers(), &[vec![1], vec![0]]);
        assert!(validate_partition(&h, &p).passes());
    }

    #[test]
    fn layer_sizes_shrink_geometrically_when_eps0_feasible() {
        // Δ=2: ε_0 = 1/(4·2⁶) = 1/256, feasible from n = 256 on.
        let n = 300;
        let h = Graph::path(n);
        let eps0 = ratio(1, 256);
        let p = partition_general(&h, 2, 2, eps0).unwrap();
        assert!(validate_partition(&h, &p).passes());
        // Reconstruct the remainder sizes: peels() is embedding order, so the
        // peel order is reversed; remainder before each peel shrinks by ≥ ε_0.
        let mut remainder: usize = n - p.wt().len() - p.w0().len();
        for layer in p.peels().iter().rev() {
            assert!(
                (remainder - layer.len()) as f64 <= (1.0 - 1.0 / 256.0) * remainder as f64,
                "layer of {} from remainder {remainder} shrinks too slowly",
                layer.len()
            );
            remainder -= layer.len();
        }
        assert_eq!(remainder, 0);
    }

    #[test]
    fn c7_girth7_frozen() {
        let h = Graph::cycle(7);
        let p = partition_girth7(&h, 2, 2, ratio(3, 20)).unwrap();
        assert_eq!(p.cap(), 2);
        assert_eq!(p.effective_depth(), 3);
        assert_eq!(
            p.layers(),
            &[vec![1, 6], vec![4], vec![3], vec![2, 5], vec![0]]
        );
        assert!(validate_partition(&h, &p).passes());
    }

    #[test]
    fn c7_with_tiny_epsilon_is_degenerate() {
        let h = Graph::cycle(7);
        let err = partition_girth7(&h, 2, 2, ratio(1, 10)).unwrap_err();
        assert!(matches!(err, PartitionError::EpsilonDegenerate { .. }));
    }

    #[test]
    fn c6_rejected_for_girth() {
        let err = partition_girth7(&Graph::cycle(6), 2, 2, ratio(1, 6)).unwrap_err();
        match err {
            PartitionError::GirthTooSmall { cycle } => assert_eq!(cycle.len(), 6),
            other => panic!("expected GirthTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn trees_pass_girth7() {
        let h = Graph::path(40);
        let p = partition_girth7(&h, 2, 2, ratio(1, 10)).unwrap();
        assert_eq!(p.cap(), 2);
        assert!(validate_partition(&h, &p).passes());
    }

    #[test]
    fn shape_violations_are_reported() {
        let k4 = Graph::complete(4);
        assert!(matches!(
            partition_general(&k4, 2, 2, ratio(1, 4)).unwrap_err(),
            PartitionError::MaxDegreeExceeded { .. }
        ));
        assert_eq!(
            partition_general(&k4, 3, 2, ratio(1, 4)).unwrap_err(),
            PartitionError::DensityExceeded { density: ratio(3, 1), bound: 2 }
        );
    }

    #[test]
    fn validator_rejects_tampered_wt() {
        // Path 0..5: W_t = {0, 3} would be only 2-independent (distance 3).
        let h = Graph::path(6);
        let p = LayeredPartition {
            layers: vec![vec![1, 2, 4], vec![5], vec![0, 3]],
            nominal_depth: 10,
            epsilon: ratio(1, 3),
            cap: 4,
        };
        let report = validate_partition(&h, &p);
        assert!(!report.passes());
        assert_eq!(
            report.wt_independent,
            Some(PropertyFailure::TooClose { layer: 2, u: 0, v: 3, distance: 3 })
        );
        // W_0 here happens to be exactly N({0,3}) = {1,2,4}, so (ii) passes.
        assert!(report.w0_is_neighborhood.is_none());
    }

    #[test]
    fn validator_rejects_wrong_w0() {
        let h = Graph::path(6);
        // W_t = {0}: N(W_t) = {1}, but claim W_0 = {1, 2}.
        let p = LayeredPartition {
            layers: vec![vec![1, 2], vec![3, 4, 5], vec![0]],
            nominal_depth: 10,
            epsilon: ratio(1, 6),
            cap: 4,
        };
        let report = validate_partition(&h, &p);
        assert_eq!(
            report.w0_is_neighborhood,
            Some(PropertyFailure::W0Mismatch { vertex: 2, expected_in_w0: false })
        );
        // {3,4,5} contains adjacent vertices: middle independence fails too.
        assert!(report.middles_independent.is_some());
    }

    #[test]
    fn validator_flags_coverage_and_back_degree() {
        let h = Graph::path(4);
        let missing = LayeredPartition {
            layers: vec![vec![1], vec![2], vec![0]],
            nominal_depth: 5,
            epsilon: ratio(1, 4),
            cap: 4,
        };
        assert_eq!(
            validate_partition(&h, &missing).partition_and_size,
            Some(PropertyFailure::Coverage { vertex: 3, appearances: 0 })
        );
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let overloaded = LayeredPartition {
            layers: vec![vec![1], vec![2, 3, 4], vec![0]],
            nominal_depth: 5,
            epsilon: ratio(1, 5),
            cap: 1,
        };
        let report = validate_partition(&star, &overloaded);
        assert_eq!(
            report.back_degree,
            Some(PropertyFailure::BackDegree { layer: 2, vertex: 0, count: 4, cap: 1 })
        );
    }

    #[test]
    fn text_round_trip() {
        let h = Graph::cycle(7);
        let p = partition_girth7(&h, 2, 2, ratio(3, 20)).unwrap();
        let text = p.to_text();
        assert_eq!(
            text,
            "t 500 t* 3 eps 3/20 d 2\nW0: 1 6\nW1: 4\nW2: 3\nW3: 2 5\nW4: 0\n"
        );
        assert_eq!(LayeredPartition::from_text(&text).unwrap(), p);
        // Empty W_0 round-trips too.
        let empty = partition_general(&Graph::empty(10), 2, 2, ratio(1, 10)).unwrap();
        assert_eq!(
            LayeredPartition::from_text(&empty.to_text()).unwrap(),
            empty
        );
    }

    #[test]
    fn from_text_rejects_garbage() {
        assert!(LayeredPartition::from_text("").is_err());
        assert!(LayeredPartition::from_text("t 3 t* 1 eps 0.1 d 2\nW0:\nW1: 0\nW2: 1\n").is_err());
        assert!(LayeredPartition::from_text("t 3 t* 1 eps 1/10 d 2\nW0:\nW1: 0\n").is_err());
        assert!(LayeredPartition::from_text("t 3 t* 0 eps 1/10 d 2\nW1: 0\nW0: 1\n").is_err());
    }
}
