//! Seeded sweep experiments over an edge-probability grid. Each (p, trial)
//! cell generates a target, prepares the host, runs the requested pipeline,
//! re-verifies every success, and yields one CSV row. Cells run in parallel
//! but rows are emitted in grid order, and every random stream is derived
//! from the base seed plus stage labels, so a rerun of the same config
//! produces byte-identical output.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{embed, verify_embedding, EmbedFailure};
use crate::graph::{load_edge_list, Graph};
use crate::hostplan::build_host_plan;
use crate::partition::{partition_general, partition_girth7, LayeredPartition, PartitionError};
use crate::rainbow::{phase1_embed, phase2_extend, split_target, verify_rainbow, RainbowError};
use crate::random::{gcnp_split_generate, gnp_generate, RandomSource};
use crate::target::{generate_target, TargetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Embed,
    Rainbow,
}

/// What to embed: a freshly generated family member per trial, or one fixed
/// graph loaded from an edge-list file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TargetSpec {
    Family(TargetFamily),
    File(String),
}

impl TargetSpec {
    /// Accepts a family name or `file:PATH`.
    pub fn parse(s: &str) -> Result<Self, String> {
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err("empty target path".into());
            }
            Ok(TargetSpec::File(path.to_string()))
        } else {
            TargetFamily::parse(s).map(TargetSpec::Family).ok_or_else(|| {
                format!(
                    "unknown target {s:?} (expected spanning_tree, bounded_density, \
                     girth7_subdivided, or file:PATH)"
                )
            })
        }
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Family(fam) => write!(f, "{}", fam.name()),
            TargetSpec::File(path) => write!(f, "file:{path}"),
        }
    }
}

impl TryFrom<String> for TargetSpec {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        TargetSpec::parse(&s)
    }
}

impl From<TargetSpec> for String {
    fn from(t: TargetSpec) -> String {
        t.to_string()
    }
}

/// Parses an exact rational from `a/b` or a decimal literal (`0.1` → 1/10).
pub fn parse_eps(s: &str) -> Result<Ratio<i64>, String> {
    let s = s.trim();
    if s.starts_with('-') {
        return Err("epsilon must be positive".into());
    }
    if let Some((a, b)) = s.split_once('/') {
        let numer: i64 = a.trim().parse().map_err(|_| format!("bad numerator {a:?}"))?;
        let denom: i64 = b.trim().parse().map_err(|_| format!("bad denominator {b:?}"))?;
        if denom == 0 {
            return Err("zero denominator".into());
        }
        Ok(Ratio::new(numer, denom))
    } else if let Some((w, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let whole: i64 =
            if w.is_empty() { 0 } else { w.parse().map_err(|_| format!("bad decimal {s:?}"))? };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().expect("digits were checked");
        Ok(Ratio::new(whole * den + num, den))
    } else {
        let n: i64 = s.parse().map_err(|_| format!("bad number {s:?}"))?;
        Ok(Ratio::from_integer(n))
    }
}

mod eps_text {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_eps(&text).map_err(serde::de::Error::custom)
    }
}

/// Full description of one sweep; everything a byte-identical rerun needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub target: TargetSpec,
    pub n: usize,
    pub delta: usize,
    pub d: usize,
    #[serde(with = "eps_text")]
    pub eps: Ratio<i64>,
    pub alpha: f64,
    pub p_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Record wall times. Off by default: with timing off the ms column is 0
    /// and reruns are byte-identical.
    #[serde(default)]
    pub timing: bool,
    /// Output path for the CSV; None leaves writing to the caller.
    #[serde(default)]
    pub out: Option<String>,
}

impl ExperimentConfig {
    /// Cheap sanity checks that catch config typos before a long run.
    pub fn validate(&self) -> Result<(), String> {
        if self.p_grid.is_empty() {
            return Err("empty probability grid".into());
        }
        for &p in &self.p_grid {
            if !(p > 0.0 && p <= 1.0) {
                return Err(format!("grid probability {p} outside (0, 1]"));
            }
        }
        if self.trials == 0 {
            return Err("trials must be at least 1".into());
        }
        if self.n < 2 {
            return Err("n must be at least 2".into());
        }
        if self.delta < 1 {
            return Err("delta must be at least 1".into());
        }
        if self.d < 1 {
            return Err("d must be at least 1".into());
        }
        match self.mode {
            Mode::Embed => {
                let (zero, one) = (Ratio::from_integer(0), Ratio::from_integer(1));
                if self.eps <= zero || self.eps >= one {
                    return Err(format!("eps {} outside (0, 1)", self.eps));
                }
            }
            Mode::Rainbow => {
                if self.alpha <= 0.0 {
                    return Err("alpha must be positive".into());
                }
            }
        }
        Ok(())
    }
}

/// Parses `a:b:step` into the inclusive grid a, a+step, …, each value rounded
/// to 9 decimals so the printed forms are stable.
pub fn parse_p_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid {s:?} is not of the form a:b:step"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad grid number {t:?}")))
        .collect::<Result<_, _>>()?;
    let (a, b, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) {
        return Err("grid step must be positive".into());
    }
    if !(a > 0.0 && b <= 1.0 && a <= b) {
        return Err(format!("grid bounds {a}:{b} must satisfy 0 < a ≤ b ≤ 1"));
    }
    let mut grid = Vec::new();
    let mut i = 0usize;
    loop {
        let x = a + i as f64 * step;
        if x > b + 1e-9 {
            break;
        }
        grid.push(round9(x));
        i += 1;
    }
    Ok(grid)
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    HallFail,
    HostPrepFail,
    PartitionFail,
    RainbowProcessFail,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::HallFail => "hall_fail",
            Outcome::HostPrepFail => "host_prep_fail",
            Outcome::PartitionFail => "partition_fail",
            Outcome::RainbowProcessFail => "rainbow_process_fail",
        }
    }
}

/// One grid cell: probability, the trial's derived stream id, the outcome
/// class, the failing step (−1 when not applicable), and elapsed wall
/// milliseconds (0 with timing off).
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub p: f64,
    pub seed: u64,
    pub outcome: Outcome,
    pub step: i64,
    pub ms: u64,
}

/// Host-side epsilon: raised to 16·t*/n when necessary so that every slice
/// keeps a floor of at least one vertex.
pub fn host_epsilon(eps: Ratio<i64>, t_star: usize, n: usize) -> Ratio<i64> {
    if t_star == 0 || n == 0 {
        return eps;
    }
    eps.max(Ratio::new(16 * t_star as i64, n as i64))
}

fn target_for_trial(
    cfg: &ExperimentConfig,
    file_target: Option<&Graph>,
    src: &RandomSource,
) -> Graph {
    match (&cfg.target, file_target) {
        (TargetSpec::File(_), Some(g)) => g.clone(),
        (TargetSpec::Family(fam), _) => {
            generate_target(*fam, cfg.n, cfg.delta, cfg.d, &src.derive("target"))
                .expect("target parameters were validated before the sweep started")
        }
        (TargetSpec::File(_), None) => unreachable!("file targets are loaded up front"),
    }
}

/// The layered partition appropriate for the configured family: the deeper
/// girth-aware construction for girth7_subdivided, the general one otherwise
/// (including file targets).
fn partition_for(
    cfg: &ExperimentConfig,
    h: &Graph,
) -> Result<LayeredPartition, PartitionError> {
    match &cfg.target {
        TargetSpec::Family(TargetFamily::Girth7Subdivided) => {
            partition_girth7(h, cfg.delta, cfg.d, cfg.eps)
        }
        _ => partition_general(h, cfg.delta, cfg.d, cfg.eps),
    }
}

fn embed_trial(
    cfg: &ExperimentConfig,
    file_target: Option<&Graph>,
    p: f64,
    src: &RandomSource,
) -> (Outcome, i64) {
    let h = target_for_trial(cfg, file_target, src);
    let n = h.n();
    let part = match partition_for(cfg, &h) {
        Ok(part) => part,
        Err(_) => return (Outcome::PartitionFail, -1),
    };
    let t_star = part.effective_depth();
    let g = gnp_generate(n, p, &src.derive("host"));
    let plan =
        match build_host_plan(&g, t_star, host_epsilon(cfg.eps, t_star, n), cfg.d, &src.derive("plan")) {
            Ok(plan) => plan,
            Err(_) => return (Outcome::HostPrepFail, -1),
        };
    match embed(&h, &part, &g, &plan, &src.derive("embed")) {
        Ok(emb) => {
            let audit = verify_embedding(&h, &g, &emb);
            assert!(audit.is_ok(), "recorded success failed re-verification: {audit:?}");
            (Outcome::Success, -1)
        }
        Err(EmbedFailure::Hall { step, .. }) => (Outcome::HallFail, step as i64),
        // plan too small or mis-shaped for the partition
        Err(
            EmbedFailure::ShapeMismatch { .. }
            | EmbedFailure::DepthTooSmall { .. }
            | EmbedFailure::CliqueTooFew { .. }
            | EmbedFailure::CliqueTooSmall { .. },
        ) => (Outcome::HostPrepFail, -1),
        // the remaining failures are partition-property violations surfacing
        // at embed time
        Err(_) => (Outcome::PartitionFail, -1),
    }
}

fn rainbow_trial(
    cfg: &ExperimentConfig,
    file_target: Option<&Graph>,
    p: f64,
    src: &RandomSource,
) -> (Outcome, i64) {
    let h = target_for_trial(cfg, file_target, src);
    let n = h.n();
    let c = (((1.0 + cfg.alpha) * h.edge_count() as f64).ceil() as u32).max(1);
    let (g1, g2) = gcnp_split_generate(n, p, c, &src.derive("hosts"));
    let split = match split_target(&h, cfg.d, cfg.alpha) {
        Ok(split) => split,
        Err(_) => return (Outcome::PartitionFail, -1),
    };
    let state = match phase1_embed(&h, &split, &g1, cfg.alpha, cfg.delta, None) {
        Ok(state) => state,
        Err(RainbowError::PoolExhausted { vertex } | RainbowError::NoCandidate { vertex }) => {
            let pos = split
                .spine
                .iter()
                .position(|&w| w == vertex)
                .map(|i| i as i64 + 1)
                .unwrap_or(-1);
            return (Outcome::RainbowProcessFail, pos);
        }
        Err(_) => return (Outcome::RainbowProcessFail, -1),
    };
    match phase2_extend(&h, &split, state, &g1, &g2, cfg.alpha, None, &src.derive("tail")) {
        Ok(emb) => {
            let audit = verify_rainbow(&h, &g1, &g2, &emb);
            assert!(audit.is_ok(), "recorded success failed re-verification: {audit:?}");
            (Outcome::Success, -1)
        }
        Err(RainbowError::ProcessStalled { step, .. }) => {
            (Outcome::RainbowProcessFail, step as i64)
        }
        Err(RainbowError::NoPerfectMatching(_)) => (Outcome::HallFail, -1),
        Err(_) => (Outcome::RainbowProcessFail, -1),
    }
}

fn run_trial(
    cfg: &ExperimentConfig,
    file_target: Option<&Graph>,
    base: &RandomSource,
    pi: usize,
    ti: usize,
) -> TrialRecord {
    let p = cfg.p_grid[pi];
    let src = base.derive(&format!("p{pi}")).derive(&format!("t{ti}"));
    let start = cfg.timing.then(Instant::now);
    let (outcome, step) = match cfg.mode {
        Mode::Embed => embed_trial(cfg, file_target, p, &src),
        Mode::Rainbow => rainbow_trial(cfg, file_target, p, &src),
    };
    let ms = start.map(|t| t.elapsed().as_millis() as u64).unwrap_or(0);
    TrialRecord { p, seed: src.stream_id(), outcome, step, ms }
}

/// Runs every (p, trial) cell in parallel and returns rows in grid order.
/// Per-trial failures become rows; only I/O and configuration errors abort.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>, String> {
    cfg.validate()?;
    let file_target = match &cfg.target {
        TargetSpec::File(path) => Some(
            load_edge_list(Path::new(path)).map_err(|e| format!("target {path}: {e}"))?,
        ),
        TargetSpec::Family(fam) => {
            // probe once: generator errors depend only on parameters
            generate_target(*fam, cfg.n, cfg.delta, cfg.d, &RandomSource::new(cfg.seed))
                .map_err(|e| format!("target family {}: {e}", fam.name()))?;
            None
        }
    };
    let base = RandomSource::new(cfg.seed);
    let cells: Vec<(usize, usize)> = (0..cfg.p_grid.len())
        .flat_map(|pi| (0..cfg.trials).map(move |ti| (pi, ti)))
        .collect();
    let mut rows: Vec<((usize, usize), TrialRecord)> = cells
        .par_iter()
        .map(|&(pi, ti)| ((pi, ti), run_trial(cfg, file_target.as_ref(), &base, pi, ti)))
        .collect();
    rows.sort_by_key(|&(cell, _)| cell);
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

/// Renders the fixed five-column table `p,seed,outcome,step,ms`.
pub fn write_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from("p,seed,outcome,step,ms\n");
    for r in records {
        out.push_str(&format!("{},{},{},{},{}\n", r.p, r.seed, r.outcome.as_str(), r.step, r.ms));
    }
    out
}

/// Success fraction per grid point, in grid order.
pub fn summarize(records: &[TrialRecord]) -> Vec<(f64, f64)> {
    let mut order: Vec<f64> = Vec::new();
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for r in records {
        let idx = match order.iter().position(|&p| p == r.p) {
            Some(i) => i,
            None => {
                order.push(r.p);
                counts.push((0, 0));
                order.len() - 1
            }
        };
        counts[idx].1 += 1;
        if r.outcome == Outcome::Success {
            counts[idx].0 += 1;
        }
    }
    order
        .into_iter()
        .zip(counts)
        .map(|(p, (ok, total))| (p, ok as f64 / total as f64))
        .collect()
}
