//! The layered embedding engine: place the pattern's base layer onto the
//! host's reserved cliques, then extend round by round via saturating
//! matchings in tuple-containment graphs, finishing with a perfect matching
//! for the deepest layer.
//!
//! Round 0 pairs the j-th deepest-layer vertex with the j-th clique and maps
//! that vertex's base neighborhood into the clique (ascending index on both
//! sides). Round i matches layer i's vertices — each represented by the
//! tuple of images of its already-embedded neighbors — into the shrinking
//! candidate set V_i^* = (V_0 ∪ … ∪ V_i) ∖ image, tracked as an explicit
//! set rather than by arithmetic. The final round must match the deepest
//! layer perfectly onto the leftover host vertices. Failures carry the round
//! index and either a Hall-violation certificate or a structural report
//! (layer-independence defects surface here as tuple conflicts).

use thiserror::Error;

use crate::bipartite::{build_aux, max_matching, AuxError, HallWitness};
use crate::graph::{Graph, Vertex};
use crate::hostplan::HostPlan;
use crate::partition::LayeredPartition;
use crate::random::RandomSource;
use rand::seq::SliceRandom;

/// A total injective vertex map pattern → host, plus the matched pairs
/// recorded per round (round 0 = base placement, last = deepest layer).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    map: Vec<Vertex>,
    layer_log: Vec<Vec<(Vertex, Vertex)>>,
}

impl Embedding {
    pub(crate) fn from_parts(map: Vec<Vertex>, layer_log: Vec<Vec<(Vertex, Vertex)>>) -> Self {
        Embedding { map, layer_log }
    }

    pub fn image(&self, v: Vertex) -> Vertex {
        self.map[v as usize]
    }

    pub fn map(&self) -> &[Vertex] {
        &self.map
    }

    pub fn layer_log(&self) -> &[Vec<(Vertex, Vertex)>] {
        &self.layer_log
    }

    /// Text form: "n <count>" then one "pattern_vertex host_vertex" line per
    /// vertex. The per-round log is a runtime diagnostic and is not stored.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.map.len());
        for (v, &g) in self.map.iter().enumerate() {
            out.push_str(&format!("{v} {g}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty input")?;
        let count: usize = header
            .strip_prefix("n ")
            .ok_or(format!("expected 'n <count>', got: {header}"))?
            .parse()
            .map_err(|e| format!("vertex count: {e}"))?;
        let mut map = vec![0 as Vertex; count];
        let mut seen = vec![false; count];
        for line in lines.by_ref().take(count) {
            let (h, g) = line.split_once(' ').ok_or(format!("expected 'h g', got: {line}"))?;
            let h: usize = h.parse().map_err(|e| format!("pattern vertex: {e}"))?;
            let g: Vertex = g.parse().map_err(|e| format!("host vertex: {e}"))?;
            if h >= count {
                return Err(format!("pattern vertex {h} out of range"));
            }
            if seen[h] {
                return Err(format!("pattern vertex {h} listed twice"));
            }
            seen[h] = true;
            map[h] = g;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(format!("pattern vertex {missing} missing"));
        }
        if let Some(extra) = lines.next() {
            return Err(format!("trailing content: {extra}"));
        }
        Ok(Embedding { map, layer_log: Vec::new() })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbedFailure {
    #[error("pattern has {pattern} vertices but host has {host}")]
    ShapeMismatch { pattern: usize, host: usize },
    #[error("partition covers {covered} of {expected} pattern vertices")]
    PartitionIncomplete { covered: usize, expected: usize },
    #[error("host plan depth {plan_depth} is less than the partition depth {needed}")]
    DepthTooSmall { plan_depth: usize, needed: usize },
    #[error("host plan reserves {cliques} cliques but the deepest layer has {needed} vertices")]
    CliqueTooFew { cliques: usize, needed: usize },
    #[error("deepest-layer vertex {vertex} has {needed} base neighbors but cliques hold {capacity}")]
    CliqueTooSmall { vertex: Vertex, needed: usize, capacity: usize },
    #[error("base vertex {vertex} neighbors two deepest-layer vertices; the deepest layer is not 3-independent")]
    BaseConflict { vertex: Vertex },
    #[error("base vertex {vertex} has no deepest-layer neighbor; the partition shape is inconsistent")]
    UnattachedBase { vertex: Vertex },
    #[error("pattern edge ({u}, {w}) lands on non-adjacent clique vertices; the deepest layer is not 3-independent")]
    CrossEdge { u: Vertex, w: Vertex },
    #[error("round {step}: tuples overlap ({source}); the layer is not 2-independent")]
    OverlappingTuples { step: usize, source: AuxError },
    #[error("round {step}: no saturating matching ({left} tuples see only {neighborhood} candidates)",
        left = witness.left_indices.len(), neighborhood = witness.neighborhood_size)]
    Hall { step: usize, witness: HallWitness },
}

/// Embeds the partitioned pattern `h` into the planned host `g`. Returns the
/// total embedding or the failing round. Host candidate order is shuffled
/// per round from `src`, so distinct seeds explore different embeddings
/// while a fixed seed is fully reproducible.
pub fn embed(
    h: &Graph,
    part: &LayeredPartition,
    g: &Graph,
    plan: &HostPlan,
    src: &RandomSource,
) -> Result<Embedding, EmbedFailure> {
    let n = h.n();
    if n != g.n() {
        return Err(EmbedFailure::ShapeMismatch { pattern: n, host: g.n() });
    }
    if part.covered() != n {
        return Err(EmbedFailure::PartitionIncomplete { covered: part.covered(), expected: n });
    }
    let t_star = part.effective_depth();
    if plan.depth() < t_star {
        return Err(EmbedFailure::DepthTooSmall { plan_depth: plan.depth(), needed: t_star });
    }
    let wt = part.wt();
    if plan.cliques().len() < wt.len() {
        return Err(EmbedFailure::CliqueTooFew { cliques: plan.cliques().len(), needed: wt.len() });
    }

    const UNSET: Vertex = Vertex::MAX;
    let mut map = vec![UNSET; n];
    let mut used = vec![false; n];
    let mut layer_log: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
    let mut rng = src.rng();

    // Round 0: measure each deepest-layer vertex's base neighborhood into
    // its own clique, ascending indices on both sides.
    let in_base = {
        let mut mask = vec![false; n];
        for &u in part.w0() {
            mask[u as usize] = true;
        }
        mask
    };
    let mut log0 = Vec::new();
    for (j, &w) in wt.iter().enumerate() {
        let clique = &plan.cliques()[j];
        let label: Vec<Vertex> =
            h.neighbors(w).iter().copied().filter(|&x| in_base[x as usize]).collect();
        if label.len() > clique.len() {
            return Err(EmbedFailure::CliqueTooSmall {
                vertex: w,
                needed: label.len(),
                capacity: clique.len(),
            });
        }
        for (&x, &slot) in label.iter().zip(clique.iter()) {
            if map[x as usize] != UNSET {
                return Err(EmbedFailure::BaseConflict { vertex: x });
            }
            map[x as usize] = slot;
            used[slot as usize] = true;
            log0.push((x, slot));
        }
    }
    for &u in part.w0() {
        if map[u as usize] == UNSET {
            return Err(EmbedFailure::UnattachedBase { vertex: u });
        }
    }
    // Base-internal pattern edges are only guaranteed inside one clique; a
    // pair landing on non-adjacent host vertices means two deepest-layer
    // vertices sit at distance ≤ 3 and the partition is invalid. (If the
    // host happens to connect a cross-clique pair, the embedding stays
    // correct and the run continues.)
    for &u in part.w0() {
        for &w in h.neighbors(u) {
            if w > u && in_base[w as usize] && !g.has_edge(map[u as usize], map[w as usize]) {
                return Err(EmbedFailure::CrossEdge { u, w });
            }
        }
    }
    layer_log.push(log0);

    // Rounds 1..t*: match each layer into the explicit candidate set.
    let mut avail = vec![false; n];
    for &v in plan.slice(0) {
        avail[v as usize] = !used[v as usize];
    }
    for i in 1..=t_star {
        for &v in plan.slice(i) {
            avail[v as usize] = true;
        }
        let layer = &part.layers()[i];
        let tuples: Vec<Vec<Vertex>> = layer
            .iter()
            .map(|&w| {
                let mut t: Vec<Vertex> = h
                    .neighbors(w)
                    .iter()
                    .filter(|&&x| map[x as usize] != UNSET)
                    .map(|&x| map[x as usize])
                    .collect();
                t.sort_unstable();
                t
            })
            .collect();
        let mut rights: Vec<Vertex> = (0..n as Vertex).filter(|&v| avail[v as usize]).collect();
        rights.shuffle(&mut rng);
        let aux = build_aux(g, tuples, rights)
            .map_err(|source| EmbedFailure::OverlappingTuples { step: i, source })?;
        let matching = max_matching(&aux.graph);
        if let Some(witness) = matching.witness {
            return Err(EmbedFailure::Hall { step: i, witness });
        }
        let mut log = Vec::with_capacity(layer.len());
        for (li, &w) in layer.iter().enumerate() {
            let image = aux.right[matching.pairs[li].expect("saturating matching")];
            map[w as usize] = image;
            used[image as usize] = true;
            avail[image as usize] = false;
            log.push((w, image));
        }
        layer_log.push(log);
    }

    // Final round: the deepest layer must match perfectly onto whatever the
    // host has left. Any slices deeper than the partition flow in here.
    for i in t_star + 1..=plan.depth() {
        for &v in plan.slice(i) {
            avail[v as usize] = true;
        }
    }
    let tuples: Vec<Vec<Vertex>> = wt
        .iter()
        .map(|&w| {
            let mut t: Vec<Vertex> =
                h.neighbors(w).iter().map(|&x| map[x as usize]).collect();
            t.sort_unstable();
            t
        })
        .collect();
    let mut rights: Vec<Vertex> = (0..n as Vertex).filter(|&v| avail[v as usize]).collect();
    assert_eq!(rights.len(), wt.len(), "covering partition leaves exactly one host slot per deepest-layer vertex");
    rights.shuffle(&mut rng);
    let final_step = t_star + 1;
    let aux = build_aux(g, tuples, rights)
        .map_err(|source| EmbedFailure::OverlappingTuples { step: final_step, source })?;
    let matching = max_matching(&aux.graph);
    if let Some(witness) = matching.witness {
        return Err(EmbedFailure::Hall { step: final_step, witness });
    }
    let mut log = Vec::with_capacity(wt.len());
    for (li, &w) in wt.iter().enumerate() {
        let image = aux.right[matching.pairs[li].expect("saturating matching")];
        map[w as usize] = image;
        used[image as usize] = true;
        log.push((w, image));
    }
    layer_log.push(log);

    Ok(Embedding { map, layer_log })
}

/// A reason an embedding is not a correct pattern copy.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EmbedDefect {
    #[error("map covers {got} vertices, pattern has {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("vertex {vertex} maps to {image}, outside the host")]
    ImageOutOfRange { vertex: Vertex, image: Vertex },
    #[error("vertices {u} and {w} both map to {image}")]
    NotInjective { u: Vertex, w: Vertex, image: Vertex },
    #[error("pattern edge ({u}, {w}) maps to the non-edge ({image_u}, {image_w})")]
    EdgeNotPreserved { u: Vertex, w: Vertex, image_u: Vertex, image_w: Vertex },
}

/// Exhaustively checks totality, injectivity, and edge preservation,
/// independent of how the embedding was produced. Reports the first defect
/// in ascending vertex/edge order.
pub fn verify_embedding(h: &Graph, g: &Graph, emb: &Embedding) -> Result<(), EmbedDefect> {
    if emb.map().len() != h.n() {
        return Err(EmbedDefect::WrongLength { got: emb.map().len(), expected: h.n() });
    }
    let mut owner: Vec<Option<Vertex>> = vec![None; g.n()];
    for (v, &image) in emb.map().iter().enumerate() {
        let v = v as Vertex;
        if image as usize >= g.n() {
            return Err(EmbedDefect::ImageOutOfRange { vertex: v, image });
        }
        if let Some(u) = owner[image as usize] {
            return Err(EmbedDefect::NotInjective { u, w: v, image });
        }
        owner[image as usize] = Some(v);
    }
    for (u, w) in h.edges() {
        let (iu, iw) = (emb.image(u), emb.image(w));
        if !g.has_edge(iu, iw) {
            return Err(EmbedDefect::EdgeNotPreserved { u, w, image_u: iu, image_w: iw });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    use crate::hostplan::build_host_plan;
    use crate::partition::partition_general;
    use crate::random::gnp_generate;

    /// Raises the host epsilon until the per-slice floor is positive, then
    /// builds the plan; mirrors how the experiment harness drives host prep.
    fn plan_for(
        g: &Graph,
        t_star: usize,
        eps: Ratio<i64>,
        d: usize,
        src: &RandomSource,
    ) -> HostPlan {
        let floor_fix = Ratio::new(16 * t_star.max(1) as i64, g.n() as i64);
        build_host_plan(g, t_star, eps.max(floor_fix), d, src).unwrap()
    }

    #[test]
    fn perfect_matching_pattern_into_complete_host() {
        let n = 100;
        let edges: Vec<(Vertex, Vertex)> =
            (0..n as Vertex / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        let h = Graph::from_edges(n, &edges).unwrap();
        let g = Graph::complete(n);
        let part = partition_general(&h, 2, 2, Ratio::new(1, 3)).unwrap();
        let plan = plan_for(&g, part.effective_depth(), Ratio::new(1, 3), 2, &RandomSource::new(1));
        let emb = embed(&h, &part, &g, &plan, &RandomSource::new(2)).unwrap();
        verify_embedding(&h, &g, &emb).unwrap();
        assert_eq!(emb.layer_log().len(), part.layers().len());
    }

    #[test]
    fn spanning_path_into_dense_random_host() {
        let n = 200;
        let h = Graph::path(n);
        let part = partition_general(&h, 2, 2, Ratio::new(1, 5)).unwrap();
        for seed in 0..20 {
            let src = RandomSource::new(seed).derive("path-host");
            let g = gnp_generate(n, 0.5, &src.derive("gnp"));
            let plan = plan_for(&g, part.effective_depth(), Ratio::new(1, 5), 2, &src.derive("plan"));
            let emb = embed(&h, &part, &g, &plan, &src.derive("embed")).unwrap();
            verify_embedding(&h, &g, &emb).unwrap();
        }
    }

    #[test]
    fn impossible_host_yields_final_round_hall_witness() {
        let h = Graph::path(2);
        let g = Graph::empty(2);
        let part = partition_general(&h, 2, 2, Ratio::new(1, 2)).unwrap();
        assert_eq!(part.effective_depth(), 0);
        let plan = build_host_plan(&g, 0, Ratio::new(1, 2), 1, &RandomSource::new(0)).unwrap();
        let err = embed(&h, &part, &g, &plan, &RandomSource::new(1)).unwrap_err();
        match err {
            EmbedFailure::Hall { step: 1, witness } => {
                assert_eq!(witness.left_indices, vec![0]);
                assert_eq!(witness.neighborhood_size, 0);
            }
            other => panic!("expected a final-round Hall failure, got {other:?}"),
        }
    }

    #[test]
    fn precondition_failures_are_reported() {
        let h = Graph::path(4);
        let part = partition_general(&h, 2, 2, Ratio::new(1, 4)).unwrap();
        let small = Graph::complete(3);
        let plan3 = build_host_plan(&small, 0, Ratio::new(1, 3), 1, &RandomSource::new(0)).unwrap();
        assert_eq!(
            embed(&h, &part, &small, &plan3, &RandomSource::new(0)).unwrap_err(),
            EmbedFailure::ShapeMismatch { pattern: 4, host: 3 }
        );

        // A perfect-matching pattern with half its vertices in the deepest
        // layer exhausts the middle rounds entirely (depth 0), so a plan
        // reserving only 32 cliques cannot host the 64-vertex layer.
        let n = 128;
        let edges: Vec<(Vertex, Vertex)> =
            (0..n as Vertex / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        let wide = Graph::from_edges(n, &edges).unwrap();
        let part = partition_general(&wide, 2, 2, Ratio::new(1, 2)).unwrap();
        assert_eq!(part.effective_depth(), 0);
        assert_eq!(part.wt().len(), 64);
        let host = Graph::complete(n);
        let lean = build_host_plan(&host, 0, Ratio::new(1, 4), 2, &RandomSource::new(0)).unwrap();
        assert_eq!(
            embed(&wide, &part, &host, &lean, &RandomSource::new(0)).unwrap_err(),
            EmbedFailure::CliqueTooFew { cliques: 32, needed: 64 }
        );
    }

    #[test]
    fn depth_mismatch_is_reported() {
        let h = Graph::path(64);
        let part = partition_general(&h, 2, 2, Ratio::new(1, 8)).unwrap();
        assert!(part.effective_depth() >= 1);
        let host = Graph::complete(64);
        let shallow = build_host_plan(&host, 0, Ratio::new(1, 8), 2, &RandomSource::new(0)).unwrap();
        assert_eq!(
            embed(&h, &part, &host, &shallow, &RandomSource::new(0)).unwrap_err(),
            EmbedFailure::DepthTooSmall { plan_depth: 0, needed: part.effective_depth() }
        );
    }

    #[test]
    fn shared_base_neighbor_is_a_structural_failure() {
        // Claimed partition: deepest layer {0, 2} both adjacent to base
        // vertex 1 — a 3-independence violation the engine must catch.
        let h = Graph::path(3);
        let part =
            LayeredPartition::from_text("t 500 t* 0 eps 2/3 d 2\nW0: 1\nW1: 0 2\n").unwrap();
        let g = Graph::complete(3);
        let plan = build_host_plan(&g, 0, Ratio::new(2, 3), 1, &RandomSource::new(0)).unwrap();
        assert_eq!(
            embed(&h, &part, &g, &plan, &RandomSource::new(0)).unwrap_err(),
            EmbedFailure::BaseConflict { vertex: 1 }
        );
    }

    #[test]
    fn cross_clique_base_edge_is_a_structural_failure() {
        // Claimed partition of P_4 with base {1, 2}: the base edge (1, 2)
        // lands on two different singleton cliques of an edgeless host.
        let h = Graph::path(4);
        let part =
            LayeredPartition::from_text("t 500 t* 0 eps 1/2 d 2\nW0: 1 2\nW1: 0 3\n").unwrap();
        let g = Graph::empty(4);
        let plan = build_host_plan(&g, 0, Ratio::new(1, 2), 1, &RandomSource::new(0)).unwrap();
        assert_eq!(
            embed(&h, &part, &g, &plan, &RandomSource::new(0)).unwrap_err(),
            EmbedFailure::CrossEdge { u: 1, w: 2 }
        );
    }

    #[test]
    fn overlapping_round_tuples_are_a_structural_failure() {
        // Pattern: star edges 0-1, 1-2, 1-3 plus isolated vertices. Claimed
        // middle layer {2, 3} shares the embedded neighbor 1 — a
        // 2-independence violation.
        let n = 64;
        let h = Graph::from_edges(n, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let mut text = String::from("t 500 t* 1 eps 1/64 d 2\nW0: 1\nW1: 2 3");
        for v in 4..n {
            text.push_str(&format!(" {v}"));
        }
        text.push_str("\nW2: 0\n");
        let part = LayeredPartition::from_text(&text).unwrap();
        let g = Graph::complete(n);
        let plan = build_host_plan(&g, 1, Ratio::new(1, 4), 1, &RandomSource::new(0)).unwrap();
        let err = embed(&h, &part, &g, &plan, &RandomSource::new(0)).unwrap_err();
        match err {
            EmbedFailure::OverlappingTuples { step: 1, source } => {
                assert_eq!(source, AuxError::OverlappingTuples { a: 0, b: 1, shared: 0 });
            }
            other => panic!("expected overlapping tuples, got {other:?}"),
        }
    }

    #[test]
    fn verifier_accepts_identity_on_subgraph() {
        let h = Graph::path(5);
        let g = Graph::cycle(5);
        let emb = Embedding { map: (0..5).collect(), layer_log: Vec::new() };
        verify_embedding(&h, &g, &emb).unwrap();
    }

    #[test]
    fn verifier_flags_planted_defects() {
        let h = Graph::path(3);
        let g = Graph::complete(3);
        assert_eq!(
            verify_embedding(&h, &g, &Embedding { map: vec![0, 1], layer_log: Vec::new() }),
            Err(EmbedDefect::WrongLength { got: 2, expected: 3 })
        );
        assert_eq!(
            verify_embedding(&h, &g, &Embedding { map: vec![0, 5, 1], layer_log: Vec::new() }),
            Err(EmbedDefect::ImageOutOfRange { vertex: 1, image: 5 })
        );
        assert_eq!(
            verify_embedding(&h, &g, &Embedding { map: vec![0, 1, 0], layer_log: Vec::new() }),
            Err(EmbedDefect::NotInjective { u: 0, w: 2, image: 0 })
        );
        let sparse = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(
            verify_embedding(&h, &sparse, &Embedding { map: vec![0, 1, 2], layer_log: Vec::new() }),
            Err(EmbedDefect::EdgeNotPreserved { u: 1, w: 2, image_u: 1, image_w: 2 })
        );
    }

    #[test]
    fn embedding_round_trips_through_text() {
        let emb = Embedding { map: vec![2, 0, 1], layer_log: Vec::new() };
        assert_eq!(emb.to_text(), "n 3\n0 2\n1 0\n2 1\n");
        assert_eq!(Embedding::from_text(&emb.to_text()).unwrap(), emb);
        assert!(Embedding::from_text("n 2\n0 1\n").is_err()); // missing line
        assert!(Embedding::from_text("n 2\n0 1\n0 0\n").is_err()); // repeat
        assert!(Embedding::from_text("x").is_err());
    }

    #[test]
    fn distinct_seeds_explore_distinct_embeddings() {
        let n = 200;
        let h = Graph::path(n);
        let part = partition_general(&h, 2, 2, Ratio::new(1, 5)).unwrap();
        let g = Graph::complete(n);
        let plan = plan_for(&g, part.effective_depth(), Ratio::new(1, 5), 2, &RandomSource::new(7));
        let a = embed(&h, &part, &g, &plan, &RandomSource::new(10)).unwrap();
        let b = embed(&h, &part, &g, &plan, &RandomSource::new(10)).unwrap();
        let c = embed(&h, &part, &g, &plan, &RandomSource::new(11)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.map(), c.map());
    }
}
