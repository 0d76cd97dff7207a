//! Trust-weighted rating prediction and leave-one-out evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{InferredGraph, NodeId};
use crate::ratings::{ItemId, RatingTable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction {
    Predicted(f64),
    Unpredictable,
}

impl Prediction {
    pub fn value(self) -> Option<f64> {
        match self {
            Prediction::Predicted(v) => Some(v),
            Prediction::Unpredictable => None,
        }
    }
}

/// Predicts `user`'s rating of `item` as the user's mean plus the
/// trust-weighted mean deviation of out-neighbors who rated the item.
///
/// With `hide_own` set, the user's own rating of `item` (if any) is left
/// out of the user's mean. If the user has no other rating, the global mean
/// stands in. The result is clamped to the rating scale.
pub fn predict_rating(
    user: NodeId,
    item: ItemId,
    graph: &InferredGraph,
    ratings: &RatingTable,
    hide_own: bool,
) -> Result<Prediction> {
    if user >= graph.node_count() {
        return Err(Error::UnknownNode {
            node: user,
            n: graph.node_count(),
        });
    }
    ratings.ensure_user_item(user, item)?;

    let mut num = 0.0;
    let mut den = 0.0;
    let mut contributors = 0usize;
    for (k, t) in graph.graph().out_edges(user) {
        let Some(r_kj) = ratings.rating(k, item) else {
            continue;
        };
        contributors += 1;
        num += t * (r_kj - ratings.user_mean(k));
        den += t;
    }
    if contributors == 0 || den == 0.0 {
        return Ok(Prediction::Unpredictable);
    }

    let own = if hide_own { ratings.rating(user, item) } else { None };
    let count = ratings.user_ratings(user).len() - usize::from(own.is_some());
    let mean = if count == 0 {
        ratings.global_mean()
    } else {
        (ratings.user_sum(user) - own.unwrap_or(0.0)) / count as f64
    };
    Ok(Prediction::Predicted(ratings.scale().clamp(mean + num / den)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub mae: f64,
    pub rmse: f64,
    pub coverage_pct: f64,
    pub total: usize,
    pub unpredictable: usize,
}

impl EvalReport {
    /// Coverage `100 (1 - unpredictable / total)`.
    pub fn coverage(total: usize, unpredictable: usize) -> f64 {
        if total == 0 {
            return 0.0;
        }
        100.0 * (1.0 - unpredictable as f64 / total as f64)
    }
}

pub fn evaluate_loo(graph: &InferredGraph, ratings: &RatingTable) -> Result<EvalReport> {
    evaluate_loo_with(graph, ratings, Exec::default())
}

/// Hides each rating in turn and predicts it; unpredictable ratings fall
/// back to the global mean and count against coverage.
pub fn evaluate_loo_with(graph: &InferredGraph, ratings: &RatingTable, exec: Exec) -> Result<EvalReport> {
    if ratings.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let all: Vec<(NodeId, ItemId, f64)> = ratings.iter().collect();
    let global = ratings.global_mean();
    let outcomes = exec.map_slice(&all, |&(u, i, r)| -> Result<(f64, bool)> {
        let p = predict_rating(u, i, graph, ratings, true)?;
        Ok(match p {
            Prediction::Predicted(v) => (r - v, true),
            Prediction::Unpredictable => (r - global, false),
        })
    });
    let mut abs = 0.0;
    let mut sq = 0.0;
    let mut missed = 0usize;
    for o in outcomes {
        let (e, ok) = o?;
        abs += e.abs();
        sq += e * e;
        if !ok {
            missed += 1;
        }
    }
    let n = all.len() as f64;
    Ok(EvalReport {
        mae: abs / n,
        rmse: (sq / n).sqrt(),
        coverage_pct: EvalReport::coverage(all.len(), missed),
        total: all.len(),
        unpredictable: missed,
    })
}

/// CSV row of the recommendation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub dataset: String,
    pub method: String,
    #[serde(rename = "MAE")]
    pub mae: f64,
    #[serde(rename = "RMSE")]
    pub rmse: f64,
    pub coverage_pct: f64,
}

impl EvalRow {
    pub fn new(dataset: impl Into<String>, method: impl Into<String>, r: &EvalReport) -> Self {
        Self {
            dataset: dataset.into(),
            method: method.into(),
            mae: r.mae,
            rmse: r.rmse,
            coverage_pct: r.coverage_pct,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TrustGraph;
    use crate::ratings::RatingScale;
    use proptest::prelude::*;

    /// users 0 (target), 1, 2; items 0 (target), 1..
    fn fixture(edges: &[(usize, usize, f64)], rows: &[(usize, usize, f64)]) -> (InferredGraph, RatingTable) {
        let g = TrustGraph::from_edges(3, edges.iter().copied()).unwrap();
        let mut t = RatingTable::new(3, 4, RatingScale::EPINIONS);
        for &(u, i, r) in rows {
            t.insert(u, i, r).unwrap();
        }
        (InferredGraph::from_original(g), t)
    }

    #[test]
    fn single_neighbor() {
        // r̄_0 = 3, neighbor 1: t = 0.5, r_1j = 4, r̄_1 = 3.5
        let (g, t) = fixture(
            &[(0, 1, 0.5)],
            &[(0, 1, 3.0), (1, 0, 4.0), (1, 1, 3.0)],
        );
        let p = predict_rating(0, 0, &g, &t, false).unwrap();
        assert!((p.value().unwrap() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn two_neighbors() {
        // k1: t 0.6, r 5, mean 4; k2: t 0.4, r 2, mean 3
        let (g, t) = fixture(
            &[(0, 1, 0.6), (0, 2, 0.4)],
            &[(0, 1, 3.0), (1, 0, 5.0), (1, 1, 3.0), (2, 0, 2.0), (2, 1, 4.0)],
        );
        let p = predict_rating(0, 0, &g, &t, false).unwrap().value().unwrap();
        assert!((p - 3.2).abs() < 1e-12);
    }

    #[test]
    fn unpredictable_and_errors() {
        let (g, t) = fixture(&[(0, 1, 0.6)], &[(0, 1, 3.0), (1, 2, 5.0)]);
        assert_eq!(predict_rating(0, 0, &g, &t, false).unwrap(), Prediction::Unpredictable);
        let (g0, t0) = fixture(&[(0, 1, 0.0)], &[(0, 1, 3.0), (1, 0, 5.0)]);
        assert_eq!(predict_rating(0, 0, &g0, &t0, false).unwrap(), Prediction::Unpredictable);
        assert!(matches!(predict_rating(9, 0, &g, &t, false), Err(Error::UnknownNode { .. })));
        assert!(matches!(predict_rating(0, 9, &g, &t, false), Err(Error::UnknownItem { .. })));
    }

    #[test]
    fn hide_own_excludes_held_out_from_mean() {
        // user 0 rated items 0 (5) and 1 (1); hiding item 0 leaves mean 1
        let (g, t) = fixture(&[(0, 1, 1.0)], &[(0, 0, 5.0), (0, 1, 1.0), (1, 0, 3.0), (1, 1, 3.0)]);
        let hidden = predict_rating(0, 0, &g, &t, true).unwrap().value().unwrap();
        assert!((hidden - 1.0).abs() < 1e-12);
        let open = predict_rating(0, 0, &g, &t, false).unwrap().value().unwrap();
        assert!((open - 3.0).abs() < 1e-12);
    }

    #[test]
    fn predictions_are_clamped() {
        // mean 5 + deviation 3 would exceed 5
        let (g, t) = fixture(&[(0, 1, 1.0)], &[(0, 1, 5.0), (1, 0, 5.0), (1, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0)]);
        let p = predict_rating(0, 0, &g, &t, false).unwrap().value().unwrap();
        assert_eq!(p, 5.0);
    }

    #[test]
    fn coverage_formula() {
        assert!((EvalReport::coverage(10, 3) - 70.0).abs() < 1e-12);
        assert_eq!(EvalReport::coverage(10, 0), 100.0);
    }

    #[test]
    fn exact_predictions_give_zero_error() {
        // everyone rates everything 3: every deviation is 0
        let edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)];
        let mut rows = Vec::new();
        for u in 0..3 {
            for i in 0..4 {
                rows.push((u, i, 3.0));
            }
        }
        let (g, t) = fixture(&edges, &rows);
        let r = evaluate_loo(&g, &t).unwrap();
        assert_eq!((r.mae, r.rmse, r.coverage_pct), (0.0, 0.0, 100.0));
    }

    #[test]
    fn symmetric_errors() {
        // 0 <-> 1, both rate item 0 (4 and 2). Hiding either leaves the user
        // without ratings, so its mean falls back to the global mean 3; the
        // neighbor's deviation is 0. Errors are +1 and -1.
        let g = TrustGraph::from_edges(2, [(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let mut t = RatingTable::new(2, 1, RatingScale::EPINIONS);
        t.insert(0, 0, 4.0).unwrap();
        t.insert(1, 0, 2.0).unwrap();
        let r = evaluate_loo(&InferredGraph::from_original(g), &t).unwrap();
        assert_eq!((r.mae, r.rmse, r.coverage_pct), (1.0, 1.0, 100.0));
        assert_eq!((r.total, r.unpredictable), (2, 0));
    }

    proptest! {
        #[test]
        fn dropping_an_edge_never_raises_coverage(
            edges in prop::collection::vec((0usize..6, 0usize..6, 0.0f64..=1.0), 1..25),
            rows in prop::collection::vec((0usize..6, 0usize..5, 1u8..=5), 1..30),
            victim in any::<prop::sample::Index>(),
        ) {
            let g = TrustGraph::from_edges(6, edges.into_iter().filter(|e| e.0 != e.1)).unwrap();
            prop_assume!(g.edge_count() > 0);
            let mut t = RatingTable::new(6, 5, RatingScale::EPINIONS);
            for (u, i, r) in rows {
                t.insert(u, i, r as f64).unwrap();
            }
            let full = InferredGraph::from_original(g.clone());
            let (s, d, _) = g.edges().nth(victim.index(g.edge_count())).unwrap();
            let mut less = full.clone();
            less.remove_edge(s, d);
            let a = evaluate_loo(&full, &t).unwrap();
            let b = evaluate_loo(&less, &t).unwrap();
            prop_assert!(b.coverage_pct <= a.coverage_pct);
            prop_assert!(a.mae <= a.rmse + 1e-12 && b.mae <= b.rmse + 1e-12);
        }
    }
}
