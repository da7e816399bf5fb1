//! Host-side preparation: partition the host graph into a large base slice
//! V_0 and equal random slices V_1..V_t*, and reserve a family of
//! vertex-disjoint d-cliques inside V_0 that the first embedding round maps
//! onto.
//!
//! The slice/clique layout feeds the layered embedding: round i may only
//! consume vertices up to slice i, and the clique family hosts the images of
//! the deepest layer's neighborhoods. Two sampled neighborhood-expansion
//! diagnostics ("P1"/"P2") estimate how suitable a host is; they are
//! descriptive only and never gate the embedding.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::bipartite::build_aux;
use crate::graph::{Graph, Vertex};
use crate::random::RandomSource;

/// Host layout: disjoint slices V_0..V_{t*} covering V(G), plus pairwise
/// disjoint d-cliques of G all contained in V_0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostPlan {
    slices: Vec<Vec<Vertex>>,
    cliques: Vec<Vec<Vertex>>,
    d: usize,
    epsilon: Ratio<i64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HostPlanError {
    #[error("epsilon {epsilon} must lie in (0,1) with floor(epsilon*n) >= 1 for n = {n}")]
    EpsilonDegenerate { epsilon: Ratio<i64>, n: usize },
    #[error("slice size floor(eps*n/(16*{t_star})) is zero for n = {n}; lower the depth or raise epsilon")]
    SliceTooSmall { n: usize, t_star: usize },
    #[error("found only {found} disjoint cliques of {needed} requested")]
    CliqueShortfall { found: usize, needed: usize },
    #[error("only {available} vertices remain outside the clique family but the slices need {required}")]
    PoolTooSmall { available: usize, required: usize },
}

/// A structural defect found by [`validate_host_plan`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HostPlanDefect {
    #[error("vertex {vertex} appears in {appearances} slices (expected exactly one)")]
    NotPartition { vertex: Vertex, appearances: usize },
    #[error("slice {index} has {size} vertices, expected {expected}")]
    SliceSizeMismatch { index: usize, size: usize, expected: usize },
    #[error("clique {index} has {size} vertices, expected {expected}")]
    CliqueSizeMismatch { index: usize, size: usize, expected: usize },
    #[error("clique {index} contains the non-adjacent pair ({u}, {v})")]
    NotAClique { index: usize, u: Vertex, v: Vertex },
    #[error("vertex {vertex} appears in more than one clique")]
    CliqueOverlap { vertex: Vertex },
    #[error("clique {index} contains vertex {vertex} outside the base slice")]
    CliqueOutsideBase { index: usize, vertex: Vertex },
}

impl HostPlan {
    /// All slices, V_0 first.
    pub fn slices(&self) -> &[Vec<Vertex>] {
        &self.slices
    }

    pub fn slice(&self, i: usize) -> &[Vertex] {
        &self.slices[i]
    }

    /// Number of non-base slices (the usable embedding depth).
    pub fn depth(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn cliques(&self) -> &[Vec<Vertex>] {
        &self.cliques
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn epsilon(&self) -> Ratio<i64> {
        self.epsilon
    }

    /// Sorted union of all clique vertices.
    pub fn clique_vertices(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.cliques.iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }

    /// Text form: a header line, one `V<i>:` line per slice, one `K:` line
    /// per clique.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "slices {} cliques {} d {} eps {}/{}\n",
            self.slices.len(),
            self.cliques.len(),
            self.d,
            self.epsilon.numer(),
            self.epsilon.denom()
        );
        for (i, slice) in self.slices.iter().enumerate() {
            out.push_str(&format!("V{i}:"));
            for v in slice {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        for clique in &self.cliques {
            out.push_str("K:");
            for v in clique {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty input")?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        if tok.len() != 8 || tok[0] != "slices" || tok[2] != "cliques" || tok[4] != "d" || tok[6] != "eps" {
            return Err(format!("bad header: {header}"));
        }
        let slice_count: usize = tok[1].parse().map_err(|e| format!("slice count: {e}"))?;
        let clique_count: usize = tok[3].parse().map_err(|e| format!("clique count: {e}"))?;
        let d: usize = tok[5].parse().map_err(|e| format!("d: {e}"))?;
        let (num, den) = tok[7].split_once('/').ok_or("eps must be a fraction p/q")?;
        let epsilon = Ratio::new(
            num.parse::<i64>().map_err(|e| format!("eps numerator: {e}"))?,
            den.parse::<i64>().map_err(|e| format!("eps denominator: {e}"))?,
        );
        let mut slices = Vec::with_capacity(slice_count);
        for i in 0..slice_count {
            let line = lines.next().ok_or(format!("missing slice line V{i}"))?;
            let rest = line
                .strip_prefix(&format!("V{i}:"))
                .ok_or(format!("expected line starting with 'V{i}:', got: {line}"))?;
            let vertices: Vec<Vertex> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|e| format!("slice V{i}: {e}")))
                .collect::<Result<_, String>>()?;
            slices.push(vertices);
        }
        let mut cliques = Vec::with_capacity(clique_count);
        for j in 0..clique_count {
            let line = lines.next().ok_or(format!("missing clique line {j}"))?;
            let rest = line
                .strip_prefix("K:")
                .ok_or(format!("expected line starting with 'K:', got: {line}"))?;
            let vertices: Vec<Vertex> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|e| format!("clique {j}: {e}")))
                .collect::<Result<_, String>>()?;
            cliques.push(vertices);
        }
        if let Some(extra) = lines.next() {
            return Err(format!("trailing content: {extra}"));
        }
        Ok(HostPlan { slices, cliques, d, epsilon })
    }
}

/// Greedy family of pairwise disjoint d-cliques: scan vertices ascending,
/// grow each clique by the smallest-index vertex adjacent to every current
/// member, stop at `count` cliques. Finding fewer than `count` is a reported
/// shortfall, not an error. d = 1 yields singletons, d = 2 a greedy matching.
pub fn find_clique_family(g: &Graph, d: usize, count: usize) -> Vec<Vec<Vertex>> {
    assert!(d >= 1, "clique size must be positive");
    let mut used = vec![false; g.n()];
    let mut out: Vec<Vec<Vertex>> = Vec::new();
    for v in 0..g.n() as Vertex {
        if out.len() == count {
            break;
        }
        if used[v as usize] {
            continue;
        }
        let mut clique = vec![v];
        while clique.len() < d {
            let pick = g.neighbors(v).iter().copied().find(|&u| {
                !used[u as usize]
                    && !clique.contains(&u)
                    && clique.iter().all(|&w| w == v || g.has_edge(w, u))
            });
            match pick {
                Some(u) => clique.push(u),
                None => break,
            }
        }
        if clique.len() == d {
            for &u in &clique {
                used[u as usize] = true;
            }
            clique.sort_unstable();
            out.push(clique);
        }
    }
    out
}

/// Builds the host layout for depth `t_star`: ⌊εn⌋ disjoint d-cliques, then
/// `t_star` random slices of exactly ⌊εn/(16·t_star)⌋ vertices each drawn
/// from outside the clique family, with V_0 absorbing everything else (so
/// the cliques always land in V_0). Deterministic given the seed source.
pub fn build_host_plan(
    g: &Graph,
    t_star: usize,
    epsilon: Ratio<i64>,
    d: usize,
    src: &RandomSource,
) -> Result<HostPlan, HostPlanError> {
    let n = g.n();
    let eps_n = (epsilon * Ratio::from_integer(n as i64)).floor().to_integer();
    if epsilon <= Ratio::from_integer(0) || epsilon >= Ratio::from_integer(1) || eps_n < 1 {
        return Err(HostPlanError::EpsilonDegenerate { epsilon, n });
    }
    let needed = eps_n as usize;
    let slice_size = if t_star > 0 {
        let s = (epsilon * Ratio::from_integer(n as i64) / Ratio::from_integer(16 * t_star as i64))
            .floor()
            .to_integer() as usize;
        if s < 1 {
            return Err(HostPlanError::SliceTooSmall { n, t_star });
        }
        s
    } else {
        0
    };
    let cliques = find_clique_family(g, d, needed);
    if cliques.len() < needed {
        return Err(HostPlanError::CliqueShortfall { found: cliques.len(), needed });
    }
    let mut in_clique = vec![false; n];
    for clique in &cliques {
        for &v in clique {
            in_clique[v as usize] = true;
        }
    }
    let mut pool: Vec<Vertex> = (0..n as Vertex).filter(|&v| !in_clique[v as usize]).collect();
    let required = slice_size * t_star;
    if pool.len() < required {
        return Err(HostPlanError::PoolTooSmall { available: pool.len(), required });
    }
    pool.shuffle(&mut src.rng());
    let mut slices = Vec::with_capacity(t_star + 1);
    let mut base: Vec<Vertex> = pool[required..].to_vec();
    base.extend((0..n as Vertex).filter(|&v| in_clique[v as usize]));
    base.sort_unstable();
    slices.push(base);
    for i in 0..t_star {
        let mut slice = pool[i * slice_size..(i + 1) * slice_size].to_vec();
        slice.sort_unstable();
        slices.push(slice);
    }
    Ok(HostPlan { slices, cliques, d, epsilon })
}

/// Re-checks a plan against the graph from scratch: slices partition V(G)
/// and have the advertised sizes; cliques are genuine, pairwise disjoint,
/// and inside V_0.
pub fn validate_host_plan(g: &Graph, plan: &HostPlan) -> Result<(), HostPlanDefect> {
    let n = g.n();
    let mut appearances = vec![0usize; n];
    for slice in plan.slices() {
        for &v in slice {
            appearances[v as usize] += 1;
        }
    }
    for (v, &count) in appearances.iter().enumerate() {
        if count != 1 {
            return Err(HostPlanDefect::NotPartition { vertex: v as Vertex, appearances: count });
        }
    }
    let t_star = plan.depth();
    if t_star > 0 {
        let expected = (plan.epsilon * Ratio::from_integer(n as i64)
            / Ratio::from_integer(16 * t_star as i64))
        .floor()
        .to_integer() as usize;
        for i in 1..=t_star {
            if plan.slice(i).len() != expected {
                return Err(HostPlanDefect::SliceSizeMismatch {
                    index: i,
                    size: plan.slice(i).len(),
                    expected,
                });
            }
        }
    }
    let in_base: std::collections::HashSet<Vertex> = plan.slice(0).iter().copied().collect();
    let mut seen = vec![false; n];
    for (index, clique) in plan.cliques().iter().enumerate() {
        if clique.len() != plan.d() {
            return Err(HostPlanDefect::CliqueSizeMismatch {
                index,
                size: clique.len(),
                expected: plan.d(),
            });
        }
        for &v in clique {
            if seen[v as usize] {
                return Err(HostPlanDefect::CliqueOverlap { vertex: v });
            }
            seen[v as usize] = true;
            if !in_base.contains(&v) {
                return Err(HostPlanDefect::CliqueOutsideBase { index, vertex: v });
            }
        }
        for (a, &u) in clique.iter().enumerate() {
            for &v in &clique[a + 1..] {
                if !g.has_edge(u, v) {
                    return Err(HostPlanDefect::NotAClique { index, u, v });
                }
            }
        }
    }
    Ok(())
}

/// Pass/fail tallies for one sampled size class of a host diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassStat {
    pub k: usize,
    pub trials: usize,
    pub passes: usize,
    /// True when the size thresholds cannot be met inside this graph, so no
    /// trial was meaningful.
    pub vacuous: bool,
}

/// Sampled host-quality diagnostics. `p1` counts trials where random small
/// vertex sets dominate enough cliques; `p2_expansion` and `p2_edge` cover
/// the two tuple-neighborhood conditions per tuple size k = 1..d. Purely
/// descriptive; never used to gate the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessReport {
    pub p1_trials: usize,
    pub p1_passes: usize,
    pub p2_expansion: Vec<ClassStat>,
    pub p2_edge: Vec<ClassStat>,
}

impl GoodnessReport {
    pub fn summary(&self) -> String {
        let mut out = format!("clique-hit count: {}/{} samples passed", self.p1_passes, self.p1_trials);
        for stat in &self.p2_expansion {
            if stat.vacuous {
                out.push_str(&format!("; expansion k={}: vacuous", stat.k));
            } else {
                out.push_str(&format!(
                    "; expansion k={}: {}/{}",
                    stat.k, stat.passes, stat.trials
                ));
            }
        }
        for stat in &self.p2_edge {
            if stat.vacuous {
                out.push_str(&format!("; edge-presence k={}: vacuous", stat.k));
            } else {
                out.push_str(&format!(
                    "; edge-presence k={}: {}/{}",
                    stat.k, stat.passes, stat.trials
                ));
            }
        }
        out
    }
}

/// Monte-Carlo spot check of the host-quality inequalities at edge density
/// `p`. Each trial draws a random admissible set (or tuple family) and tests
/// the corresponding inequality; exhaustive quantification is deliberately
/// not attempted. Sampling is deterministic given the seed source.
pub fn spot_check_goodness(
    g: &Graph,
    plan: &HostPlan,
    p: f64,
    d: usize,
    samples: usize,
    src: &RandomSource,
) -> GoodnessReport {
    assert!(p > 0.0 && p <= 1.0, "p must lie in (0, 1]");
    assert_eq!(d, plan.d(), "diagnostic clique size must match the plan");
    let n = g.n();
    let mut rng = src.rng();
    let clique_vertices = plan.clique_vertices();
    let in_family: std::collections::HashSet<Vertex> = clique_vertices.iter().copied().collect();
    let outside: Vec<Vertex> =
        (0..n as Vertex).filter(|v| !in_family.contains(v)).collect();

    // P1: random U outside the clique family, |U| ≤ (2/p)^d / 2; the number
    // of cliques fully inside some N(u) must be ≥ p^d |U| |K| / 2^(d+2).
    let mut p1_trials = 0;
    let mut p1_passes = 0;
    let u_cap = (((2.0 / p).powi(d as i32)) / 2.0).floor().min(outside.len() as f64) as usize;
    if u_cap >= 1 && !plan.cliques().is_empty() {
        for _ in 0..samples {
            let size = rng.random_range(1..=u_cap);
            let idx = rand::seq::index::sample(&mut rng, outside.len(), size);
            let chosen: Vec<Vertex> = idx.iter().map(|i| outside[i]).collect();
            let mut is_neighbor = vec![false; n];
            let mut hit = vec![false; plan.cliques().len()];
            for &u in &chosen {
                for &w in g.neighbors(u) {
                    is_neighbor[w as usize] = true;
                }
                for (ci, clique) in plan.cliques().iter().enumerate() {
                    if !hit[ci] && clique.iter().all(|&v| is_neighbor[v as usize]) {
                        hit[ci] = true;
                    }
                }
                for &w in g.neighbors(u) {
                    is_neighbor[w as usize] = false;
                }
            }
            let count = hit.iter().filter(|&&h| h).count();
            let bound = p.powi(d as i32) * size as f64 * plan.cliques().len() as f64
                / 2f64.powi(d as i32 + 2);
            p1_trials += 1;
            if count as f64 >= bound {
                p1_passes += 1;
            }
        }
    }

    let ln_n = (n.max(2) as f64).ln();
    let mut p2_expansion = Vec::new();
    let mut p2_edge = Vec::new();
    for k in 1..=d {
        // Expansion clause: tuples outside a slice V_i must together reach a
        // p-proportional share of V_i.
        let l_cap = (((2.0 / p).powi(k as i32)) / 2.0).floor() as usize;
        let mut stat = ClassStat { k, trials: 0, passes: 0, vacuous: false };
        if plan.depth() == 0 || l_cap < 1 {
            stat.vacuous = true;
        } else {
            for _ in 0..samples {
                let i = rng.random_range(1..=plan.depth());
                let slice = plan.slice(i);
                let pool: Vec<Vertex> = {
                    let in_slice: std::collections::HashSet<Vertex> =
                        slice.iter().copied().collect();
                    (0..n as Vertex).filter(|v| !in_slice.contains(v)).collect()
                };
                let max_tuples = l_cap.min(pool.len() / k);
                if max_tuples < 1 {
                    continue;
                }
                let tuples_count = rng.random_range(1..=max_tuples);
                let idx = rand::seq::index::sample(&mut rng, pool.len(), tuples_count * k);
                let flat: Vec<Vertex> = idx.iter().map(|j| pool[j]).collect();
                let tuples: Vec<Vec<Vertex>> =
                    flat.chunks(k).map(<[Vertex]>::to_vec).collect();
                let aux = build_aux(g, tuples, slice.to_vec())
                    .expect("sampled tuples are disjoint by construction");
                let mut reached = vec![false; slice.len()];
                for l in 0..aux.graph.left_count() {
                    for &r in aux.graph.neighbors(l) {
                        reached[r] = true;
                    }
                }
                let reach = reached.iter().filter(|&&r| r).count();
                let bound = (p / 2.0).powi(k as i32) * tuples_count as f64 * slice.len() as f64 / 2.0;
                stat.trials += 1;
                if reach as f64 >= bound {
                    stat.passes += 1;
                }
            }
        }
        p2_expansion.push(stat);

        // Edge-presence clause: once both the tuple family and U reach the
        // threshold size, the containment graph must have at least one edge.
        // At small n the threshold can exceed n; such classes are recorded
        // as vacuous instead of being faked.
        let threshold = (2.0 / p).powi(k as i32) * ln_n.powi(2 * (d as i32 - 1));
        let mut stat = ClassStat { k, trials: 0, passes: 0, vacuous: false };
        let min_side = threshold.ceil() as usize;
        if threshold > n as f64 || min_side.saturating_mul(k) + min_side > n {
            stat.vacuous = true;
        } else {
            for _ in 0..samples {
                let idx = rand::seq::index::sample(&mut rng, n, min_side * k + min_side);
                let flat: Vec<Vertex> = idx.iter().map(|j| j as Vertex).collect();
                let tuples: Vec<Vec<Vertex>> =
                    flat[..min_side * k].chunks(k).map(<[Vertex]>::to_vec).collect();
                let u_side = flat[min_side * k..].to_vec();
                let aux = build_aux(g, tuples, u_side)
                    .expect("sampled tuples are disjoint by construction");
                stat.trials += 1;
                if aux.graph.edge_count() >= 1 {
                    stat.passes += 1;
                }
            }
        }
        p2_edge.push(stat);
    }

    GoodnessReport { p1_trials, p1_passes, p2_expansion, p2_edge }
}
