//! Path scoring and construction of the inferred graph.
//!
//! A path of length `l` between `i` and `j` scores
//! `1 - (l - 1) / l_max + benefit(intermediates)`; the inferred trust of a
//! pair is the maximum score over its stored paths.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{InferredGraph, NodeId, NodeWeights, PathIndex, TrustGraph};
use crate::ratings::RatingTable;
use crate::weights::{delta_weights, gamma_weights, WeightConfig, WeightKind};

/// How a path's intermediate nodes add to its score.
#[derive(Debug, Clone, PartialEq)]
pub enum Benefit {
    /// Sum of δ over intermediates.
    DeltaSum(NodeWeights),
    /// σ(Σγ) / l_max over intermediates.
    GammaSigmoid(NodeWeights),
    /// No benefit; the best path is then a shortest one.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoringConfig {
    pub l_max: usize,
    pub benefit: Benefit,
}

impl ScoringConfig {
    pub fn new(l_max: usize, benefit: Benefit) -> Self {
        Self { l_max, benefit }
    }

    /// Scoring paired with a weight kind: indegree and δ both score with
    /// the δ sum (using `cfg.q`, `cfg.epsilon`), γ with the sigmoid.
    pub fn for_weights(
        graph: &TrustGraph,
        ratings: &RatingTable,
        cfg: &WeightConfig,
        l_max: usize,
    ) -> Result<Self> {
        cfg.validate(l_max)?;
        let benefit = match cfg.kind {
            WeightKind::Indegree | WeightKind::Delta => {
                Benefit::DeltaSum(delta_weights(graph, cfg.q_for(l_max), cfg.epsilon)?)
            }
            WeightKind::Gamma => Benefit::GammaSigmoid(gamma_weights(graph, ratings, cfg)?),
        };
        Ok(Self { l_max, benefit })
    }
}

/// Linear length penalty `(len - 1) / l_max` for `2 <= len <= l_max`.
pub fn penalty(len: usize, l_max: usize) -> Result<f64> {
    if len < 2 || len > l_max {
        return Err(Error::PathLength { len, l_max });
    }
    Ok((len - 1) as f64 / l_max as f64)
}

pub fn benefit_delta(intermediates: &[NodeId], delta: &NodeWeights) -> f64 {
    intermediates.iter().map(|&x| delta.get(x)).sum()
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

pub fn benefit_gamma(intermediates: &[NodeId], gamma: &NodeWeights, l_max: usize) -> f64 {
    let sum: f64 = intermediates.iter().map(|&x| gamma.get(x)).sum();
    sigmoid(sum) / l_max as f64
}

/// Candidate trust of a single path `<src, ..., dst>`.
pub fn score_path(path: &[NodeId], cfg: &ScoringConfig) -> Result<f64> {
    let len = path.len().saturating_sub(1);
    let p = penalty(len, cfg.l_max)?;
    let mid = &path[1..path.len() - 1];
    let b = match &cfg.benefit {
        Benefit::DeltaSum(delta) => benefit_delta(mid, delta),
        Benefit::GammaSigmoid(gamma) => benefit_gamma(mid, gamma, cfg.l_max),
        Benefit::Zero => 0.0,
    };
    Ok(1.0 - p + b)
}

/// Highest score in `paths` and the lexicographically smallest path
/// attaining it.
pub fn best_path<'a>(paths: &'a [Vec<NodeId>], cfg: &ScoringConfig) -> Result<Option<(f64, &'a [NodeId])>> {
    let mut best: Option<(f64, &[NodeId])> = None;
    for p in paths {
        let s = score_path(p, cfg)?;
        best = match best {
            Some((bs, bp)) if bs > s || (bs == s && bp <= p.as_slice()) => Some((bs, bp)),
            _ => Some((s, p.as_slice())),
        };
    }
    Ok(best)
}

/// Maximizing score and path for one pair, for diagnostics.
pub fn explain(index: &PathIndex, src: NodeId, dst: NodeId, cfg: &ScoringConfig) -> Result<Option<(f64, Vec<NodeId>)>> {
    match index.get(src, dst) {
        None => Ok(None),
        Some(paths) => Ok(best_path(paths, cfg)?.map(|(s, p)| (s, p.to_vec()))),
    }
}

pub fn build_inferred(graph: &TrustGraph, index: &PathIndex, cfg: &ScoringConfig) -> Result<InferredGraph> {
    build_inferred_with(graph, index, cfg, Exec::default())
}

/// Adds one inferred edge per index key, weighted by the best path score.
/// Every path is validated against `graph` first.
pub fn build_inferred_with(
    graph: &TrustGraph,
    index: &PathIndex,
    cfg: &ScoringConfig,
    exec: Exec,
) -> Result<InferredGraph> {
    let weights_len = match &cfg.benefit {
        Benefit::DeltaSum(w) | Benefit::GammaSigmoid(w) => Some(w.len()),
        Benefit::Zero => None,
    };
    if let Some(len) = weights_len {
        if len != graph.node_count() {
            return Err(Error::UniverseMismatch {
                left: graph.node_count(),
                right: len,
            });
        }
    }
    let entries: Vec<_> = index.entries().iter().collect();
    let scored = exec.map_slice(&entries, |&(&key, paths)| -> Result<((NodeId, NodeId), f64)> {
        let mut best = 0.0f64;
        for p in paths {
            PathIndex::check_path(graph, key, p, cfg.l_max)?;
            let s = score_path(p, cfg)?;
            if s > best {
                best = s;
            }
        }
        if paths.is_empty() {
            return Err(Error::CorruptIndex {
                src: key.0,
                dst: key.1,
                reason: "empty path list".into(),
            });
        }
        debug_assert!(best > 0.0 && best <= 1.0 + 1e-12, "inferred trust {best} out of range");
        Ok((key, best))
    });
    let mut out = InferredGraph::from_original(graph.clone());
    for r in scored {
        let ((s, d), w) = r?;
        out.add_inferred(s, d, w)?;
    }
    Ok(out)
}
