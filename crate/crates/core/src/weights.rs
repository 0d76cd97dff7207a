//! Node influence weights: indegree, degree-of-trustworthiness (δ) and
//! degree-of-TrustNPurchase (γ).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{NodeWeights, TrustGraph};
use crate::ratings::RatingTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Indegree,
    Delta,
    Gamma,
}

impl WeightKind {
    pub const ALL: [WeightKind; 3] = [WeightKind::Indegree, WeightKind::Delta, WeightKind::Gamma];

    pub fn label(self) -> &'static str {
        match self {
            WeightKind::Indegree => "indeg",
            WeightKind::Delta => "delta",
            WeightKind::Gamma => "gamma",
        }
    }

    /// Default cutoff scale: 1 for indegree, `10 * l_max` for δ and γ.
    pub fn default_cth(self, l_max: usize) -> f64 {
        match self {
            WeightKind::Indegree => 1.0,
            WeightKind::Delta | WeightKind::Gamma => 10.0 * l_max as f64,
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "indeg" | "indegree" => Ok(WeightKind::Indegree),
            "delta" => Ok(WeightKind::Delta),
            "gamma" => Ok(WeightKind::Gamma),
            _ => Err(Error::Config(format!("unknown weight kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemCategory {
    Heavy,
    Average,
    Cold,
}

/// Parameters of the weight functions.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightConfig {
    pub kind: WeightKind,
    /// Scale of δ; `None` means `1 / l_max`.
    pub q: Option<f64>,
    pub epsilon: f64,
    /// Items with at least this many ratings are heavy.
    pub heavy_min_count: usize,
    /// Items with at most this many ratings are cold.
    pub cold_max_count: usize,
}

impl WeightConfig {
    pub const DEFAULT_HEAVY_MIN: usize = 20;
    pub const DEFAULT_COLD_MAX: usize = 4;

    pub fn new(kind: WeightKind) -> Self {
        Self {
            kind,
            q: None,
            epsilon: 0.0,
            heavy_min_count: Self::DEFAULT_HEAVY_MIN,
            cold_max_count: Self::DEFAULT_COLD_MAX,
        }
    }

    pub fn q_for(&self, l_max: usize) -> f64 {
        self.q.unwrap_or(1.0 / l_max as f64)
    }

    pub fn validate(&self, l_max: usize) -> Result<()> {
        if l_max < 2 {
            return Err(Error::Config(format!("l_max must be >= 2, got {l_max}")));
        }
        let q = self.q_for(l_max);
        if !(q > 0.0 && q <= 1.0 / l_max as f64) {
            return Err(Error::Config(format!(
                "q = {q} violates 0 < q <= 1/l_max = {}",
                1.0 / l_max as f64
            )));
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::Config(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if self.cold_max_count >= self.heavy_min_count {
            return Err(Error::Config(format!(
                "cold-max-count {} must be below heavy-min-count {}",
                self.cold_max_count, self.heavy_min_count
            )));
        }
        Ok(())
    }
}

/// θ_i = indeg(i).
pub fn indegree_weights(graph: &TrustGraph) -> NodeWeights {
    NodeWeights::new(graph.indegrees().iter().map(|&d| d as f64).collect())
        .expect("indegrees are non-negative")
}

/// δ_i = q · indeg(i) / (max indeg + ε).
pub fn delta_weights(graph: &TrustGraph, q: f64, epsilon: f64) -> Result<NodeWeights> {
    if !q.is_finite() || q <= 0.0 || !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::Config(format!("invalid q = {q} or epsilon = {epsilon}")));
    }
    let denom = graph.max_indegree() as f64 + epsilon;
    if denom <= 0.0 {
        return Err(Error::DegenerateGraph);
    }
    NodeWeights::new(
        graph
            .indegrees()
            .iter()
            // ratio first, so the top node gets exactly q
            .map(|&d| q * (d as f64 / denom))
            .collect(),
    )
}

pub fn categorize_items(ratings: &RatingTable, cfg: &WeightConfig) -> Vec<ItemCategory> {
    ratings
        .item_counts()
        .iter()
        .map(|&c| {
            if c >= cfg.heavy_min_count {
                ItemCategory::Heavy
            } else if c <= cfg.cold_max_count {
                ItemCategory::Cold
            } else {
                ItemCategory::Average
            }
        })
        .collect()
}

/// γ_i: heavy, average and cold purchase counts plus indegree, each
/// normalized by its maximum over users. Empty terms contribute 0.
pub fn gamma_weights(
    graph: &TrustGraph,
    ratings: &RatingTable,
    cfg: &WeightConfig,
) -> Result<NodeWeights> {
    let n = graph.node_count();
    if ratings.user_count() != n {
        return Err(Error::UniverseMismatch {
            left: n,
            right: ratings.user_count(),
        });
    }
    let cats = categorize_items(ratings, cfg);
    // [heavy, average, cold] per user
    let counts: Vec<[usize; 3]> = (0..n)
        .map(|u| {
            let mut c = [0usize; 3];
            for &(item, _) in ratings.user_ratings(u) {
                let slot = match cats[item] {
                    ItemCategory::Heavy => 0,
                    ItemCategory::Average => 1,
                    ItemCategory::Cold => 2,
                };
                c[slot] += 1;
            }
            c
        })
        .collect();
    let mut max = [0usize; 3];
    for c in &counts {
        for k in 0..3 {
            max[k] = max[k].max(c[k]);
        }
    }
    let max_indeg = graph.max_indegree();
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    NodeWeights::new(
        (0..n)
            .map(|u| {
                let c = counts[u];
                ratio(c[0], max[0])
                    + ratio(c[1], max[1])
                    + ratio(c[2], max[2])
                    + ratio(graph.indegree(u), max_indeg)
            })
            .collect(),
    )
}

/// Threshold weights θ for the configured kind.
pub fn node_weights(
    graph: &TrustGraph,
    ratings: &RatingTable,
    cfg: &WeightConfig,
    l_max: usize,
) -> Result<NodeWeights> {
    match cfg.kind {
        WeightKind::Indegree => Ok(indegree_weights(graph)),
        WeightKind::Delta => delta_weights(graph, cfg.q_for(l_max), cfg.epsilon),
        WeightKind::Gamma => gamma_weights(graph, ratings, cfg),
    }
}
