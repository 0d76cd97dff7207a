//! Comparison of a heuristic inferred graph against the exhaustive one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::InferredGraph;

/// `|E| / (n (n - 1))`.
pub fn density(edge_count: usize, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Config(format!("density needs at least 2 nodes, got {n}")));
    }
    Ok(edge_count as f64 / (n as f64 * (n - 1) as f64))
}

/// Percentage of the oracle's edges the heuristic graph lacks; 0 when the
/// oracle has no edges.
pub fn edges_missed_pct(oracle_edges: usize, heuristic_edges: usize) -> f64 {
    if oracle_edges == 0 {
        return 0.0;
    }
    100.0 * (oracle_edges as f64 - heuristic_edges as f64) / oracle_edges as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Suboptimality {
    /// Percent of the oracle's inferred edges where the heuristic is lower.
    pub score_pct: f64,
    /// Mean shortfall over those edges.
    pub mean_error: f64,
    pub suboptimal: usize,
}

/// Over the oracle's inferred edges, counts those where the heuristic
/// weight (0 when absent) is strictly lower and averages the shortfall.
pub fn score_and_mean_error(oracle: &InferredGraph, heuristic: &InferredGraph) -> Result<Suboptimality> {
    if oracle.node_count() != heuristic.node_count() {
        return Err(Error::UniverseMismatch {
            left: oracle.node_count(),
            right: heuristic.node_count(),
        });
    }
    let mut total = 0usize;
    let mut suboptimal = 0usize;
    let mut err_sum = 0.0;
    for ((s, d), w) in oracle.inferred_edges() {
        total += 1;
        let h = heuristic.graph().weight(s, d).unwrap_or(0.0);
        if h < w {
            suboptimal += 1;
            err_sum += w - h;
        }
    }
    let score_pct = if total == 0 {
        0.0
    } else {
        100.0 * suboptimal as f64 / total as f64
    };
    let mean_error = if suboptimal == 0 {
        0.0
    } else {
        err_sum / suboptimal as f64
    };
    Ok(Suboptimality {
        score_pct,
        mean_error,
        suboptimal,
    })
}

/// One row of the method comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub method: String,
    pub weight: String,
    #[serde(rename = "L_max")]
    pub l_max: usize,
    pub duration_s: f64,
    pub path_count: usize,
    pub edges: usize,
    pub density: f64,
    /// Empty for the exhaustive method itself.
    pub edges_missed_pct: Option<f64>,
    pub score_pct: Option<f64>,
    pub mean_error: Option<f64>,
}

impl ComparisonReport {
    pub fn check(&self) -> Result<()> {
        let pct = |v: Option<f64>| v.is_none_or(|x| (0.0..=100.0).contains(&x));
        if !pct(self.edges_missed_pct) || !pct(self.score_pct) {
            return Err(Error::Invariant(format!("percentages out of range in {self:?}")));
        }
        if self.mean_error.is_some_and(|e| e < 0.0) || !(0.0..=1.0).contains(&self.density) {
            return Err(Error::Invariant(format!("metric out of range in {self:?}")));
        }
        Ok(())
    }
}
