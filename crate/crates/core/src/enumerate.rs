//! Bounded-length simple-path enumeration between non-adjacent pairs.
//!
//! Three strategies share one depth-first engine:
//!
//! * [`Method::All`] expands every simple path up to `l_max` edges.
//! * [`Method::H1`] expands a successor further only if its weight clears a
//!   cutoff derived from the current node's successor weights. Pairs reached
//!   only through pruned nodes are lost.
//! * [`Method::H2`] behaves like H1, but continues below each pruned node in
//!   check mode: there it records a path only for pairs that have no entry
//!   yet, so the set of discovered pairs equals the exhaustive one.
//!
//! The first hop out of every source is always expanded. Expansion runs
//! per source node; keys of different sources never collide, so the merge
//! is a plain concatenation in source order and the output does not depend
//! on scheduling.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{NodeId, NodeWeights, Path, PathIndex, TrustGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    All,
    H1,
    H2,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::All => "all",
            Method::H1 => "h1",
            Method::H2 => "h2",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Method::All),
            "h1" => Ok(Method::H1),
            "h2" => Ok(Method::H2),
            _ => Err(Error::Config(format!("unknown method {s:?}"))),
        }
    }
}

/// How the per-step cutoff is derived from the successors' weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// `c_th` times the mean weight; a node passes when `θ >= cutoff`.
    MeanScaled { c_th: f64 },
    /// Nearest-rank `alpha` percentile; a node passes when `θ > cutoff`.
    AlphaPercentile { alpha: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumConfig {
    pub l_max: usize,
    pub method: Method,
    pub cutoff: Cutoff,
    pub exec: Exec,
    /// Abort once more than this many paths have been stored.
    pub max_paths: Option<usize>,
}

impl EnumConfig {
    pub fn new(method: Method, l_max: usize, cutoff: Cutoff) -> Self {
        Self {
            l_max,
            method,
            cutoff,
            exec: Exec::default(),
            max_paths: None,
        }
    }

    pub fn all(l_max: usize) -> Self {
        Self::new(Method::All, l_max, Cutoff::MeanScaled { c_th: 0.0 })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.l_max < 2 {
            return Err(Error::Config(format!("l_max must be >= 2, got {}", self.l_max)));
        }
        match self.cutoff {
            Cutoff::MeanScaled { c_th } => {
                // 0 is admitted: it disables pruning.
                if !(c_th.is_finite() && c_th >= 0.0) {
                    return Err(Error::Config(format!("c_th must be >= 0, got {c_th}")));
                }
            }
            Cutoff::AlphaPercentile { alpha } => {
                if !(alpha > 0.0 && alpha < 100.0) {
                    return Err(Error::Config(format!("alpha must be in (0, 100), got {alpha}")));
                }
            }
        }
        Ok(())
    }
}

/// `c_th` times the arithmetic mean of `weights`. `None` on an empty list.
pub fn theta_cutoff(weights: &[f64], c_th: f64) -> Option<f64> {
    if weights.is_empty() {
        return None;
    }
    Some(c_th * weights.iter().sum::<f64>() / weights.len() as f64)
}

/// Nearest-rank percentile: the element at 1-based rank
/// `ceil(alpha / 100 * len)` of the ascending sort.
pub fn alpha_cutoff(weights: &[f64], alpha: f64) -> Option<f64> {
    if weights.is_empty() {
        return None;
    }
    let mut sorted = weights.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (alpha * sorted.len() as f64 / 100.0).ceil() as usize;
    Some(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Every simple path of length `2..=l_max` between non-adjacent pairs.
pub fn enumerate_all(graph: &TrustGraph, l_max: usize) -> Result<PathIndex> {
    let weights = NodeWeights::zeros(graph.node_count());
    enumerate(graph, &weights, &EnumConfig::all(l_max))
}

pub fn enumerate_h1(graph: &TrustGraph, weights: &NodeWeights, l_max: usize, cutoff: Cutoff) -> Result<PathIndex> {
    enumerate(graph, weights, &EnumConfig::new(Method::H1, l_max, cutoff))
}

pub fn enumerate_h2(graph: &TrustGraph, weights: &NodeWeights, l_max: usize, cutoff: Cutoff) -> Result<PathIndex> {
    enumerate(graph, weights, &EnumConfig::new(Method::H2, l_max, cutoff))
}

/// Runs the configured enumeration over every source node.
pub fn enumerate(graph: &TrustGraph, weights: &NodeWeights, cfg: &EnumConfig) -> Result<PathIndex> {
    cfg.validate()?;
    if weights.len() != graph.node_count() {
        return Err(Error::UniverseMismatch {
            left: graph.node_count(),
            right: weights.len(),
        });
    }
    let budget = Budget {
        limit: cfg.max_paths,
        used: AtomicUsize::new(0),
        exceeded: AtomicBool::new(false),
    };
    let per_source = cfg.exec.map_range(graph.node_count(), |src| {
        if budget.exceeded.load(Ordering::Relaxed) {
            return Vec::new();
        }
        let mut walker = Walker {
            graph,
            weights: weights.as_slice(),
            cfg,
            src,
            found: HashMap::new(),
            budget: &budget,
        };
        walker.run();
        walker.into_entries()
    });
    if budget.exceeded.load(Ordering::Relaxed) {
        return Err(Error::PathBudgetExceeded(cfg.max_paths.unwrap_or(0)));
    }
    let mut index = PathIndex::new();
    for (src, entries) in per_source.into_iter().enumerate() {
        for (dst, paths) in entries {
            index.insert_list((src, dst), paths);
        }
    }
    Ok(index)
}

struct Budget {
    limit: Option<usize>,
    used: AtomicUsize,
    exceeded: AtomicBool,
}

impl Budget {
    fn charge(&self) -> bool {
        let Some(limit) = self.limit else {
            return true;
        };
        if self.used.fetch_add(1, Ordering::Relaxed) >= limit {
            self.exceeded.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Depth-first expansion from one source node.
struct Walker<'a> {
    graph: &'a TrustGraph,
    weights: &'a [f64],
    cfg: &'a EnumConfig,
    src: NodeId,
    found: HashMap<NodeId, Vec<Path>>,
    budget: &'a Budget,
}

impl Walker<'_> {
    fn run(&mut self) {
        let mut path = Vec::with_capacity(self.cfg.l_max + 1);
        for &first in self.graph.succ(self.src) {
            path.clear();
            path.push(self.src);
            path.push(first);
            self.expand(first, self.cfg.l_max, &mut path);
        }
    }

    fn into_entries(self) -> Vec<(NodeId, Vec<Path>)> {
        let mut out: Vec<(NodeId, Vec<Path>)> = self.found.into_iter().collect();
        out.sort_unstable_by_key(|(d, _)| *d);
        out
    }

    fn aborted(&self) -> bool {
        self.budget.limit.is_some() && self.budget.exceeded.load(Ordering::Relaxed)
    }

    fn record(&mut self, dst: NodeId, path: &[NodeId]) {
        if !self.budget.charge() {
            return;
        }
        self.found.entry(dst).or_default().push(path.to_vec());
    }

    /// Threshold mode, extending `path` (which ends at `cur`) with
    /// `budget` hops still allowed counting the one that reached `cur`.
    fn expand(&mut self, cur: NodeId, budget: usize, path: &mut Vec<NodeId>) {
        if budget == 1 || self.aborted() {
            return;
        }
        let succ = self.graph.succ(cur);
        if succ.is_empty() {
            return;
        }
        let gate = self.gate(succ);
        for &next in succ {
            if next == self.src || path.contains(&next) {
                continue;
            }
            path.push(next);
            if !self.graph.has_edge(self.src, next) {
                self.record(next, path);
            }
            if gate.passes(self.weights[next]) {
                self.expand(next, budget - 1, path);
            } else if self.cfg.method == Method::H2 {
                self.check(next, budget - 1, path);
            }
            path.pop();
        }
    }

    /// Check mode: unconditional recursion, record only unseen pairs.
    fn check(&mut self, cur: NodeId, budget: usize, path: &mut Vec<NodeId>) {
        if budget == 1 || self.aborted() {
            return;
        }
        for &next in self.graph.succ(cur) {
            if next == self.src || path.contains(&next) {
                continue;
            }
            path.push(next);
            if !self.graph.has_edge(self.src, next) && !self.found.contains_key(&next) {
                self.record(next, path);
            }
            self.check(next, budget - 1, path);
            path.pop();
        }
    }

    fn gate(&self, succ: &[NodeId]) -> Gate {
        if self.cfg.method == Method::All {
            return Gate::Open;
        }
        match self.cfg.cutoff {
            Cutoff::MeanScaled { c_th } => {
                let sum: f64 = succ.iter().map(|&s| self.weights[s]).sum();
                Gate::AtLeastScaledMean {
                    scaled_sum: c_th * sum,
                    len: succ.len() as f64,
                }
            }
            Cutoff::AlphaPercentile { alpha } => {
                let ws: Vec<f64> = succ.iter().map(|&s| self.weights[s]).collect();
                Gate::Above(alpha_cutoff(&ws, alpha).expect("non-empty successor list"))
            }
        }
    }
}

enum Gate {
    Open,
    /// θ · len >= c_th · Σθ, i.e. θ >= c_th · mean without dividing, so
    /// a node whose weight equals the mean passes at `c_th = 1`.
    AtLeastScaledMean { scaled_sum: f64, len: f64 },
    Above(f64),
}

impl Gate {
    #[inline]
    fn passes(&self, theta: f64) -> bool {
        match *self {
            Gate::Open => true,
            Gate::AtLeastScaledMean { scaled_sum, len } => theta * len >= scaled_sum,
            Gate::Above(cut) => theta > cut,
        }
    }
}
