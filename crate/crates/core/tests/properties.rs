mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{brute_force, Dense, RefBenefit};
use trust_infer::{build_inferred, enumerate, Benefit, Cutoff, EnumConfig, Exec, Method, NodeWeights, ScoringConfig, TrustGraph};

fn graph_strategy() -> impl Strategy<Value = TrustGraph> {
    (2usize..12).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 0.01f64..=1.0), 0..40).prop_map(move |edges| {
            TrustGraph::from_edges(n, edges.into_iter().filter(|e| e.0 != e.1)).unwrap()
        })
    })
}

fn cutoff_strategy() -> impl Strategy<Value = Cutoff> {
    prop_oneof![
        (0.0f64..3.0).prop_map(|c_th| Cutoff::MeanScaled { c_th }),
        (1.0f64..99.0).prop_map(|alpha| Cutoff::AlphaPercentile { alpha }),
    ]
}

fn path_set(idx: &trust_infer::PathIndex) -> BTreeSet<Vec<usize>> {
    idx.iter().flat_map(|(_, ps)| ps.iter().cloned()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exhaustive_matches_brute_force(g in graph_strategy(), l_max in 2usize..5) {
        let dense = Dense::from_graph(&g);
        let reference = brute_force(&dense, l_max, &RefBenefit::Delta(dense.delta(l_max)));
        let idx = enumerate(&g, &NodeWeights::zeros(g.node_count()), &EnumConfig::all(l_max)).unwrap();
        prop_assert_eq!(idx.path_count(), reference.paths);
        let benefit = if g.max_indegree() == 0 {
            Benefit::Zero
        } else {
            Benefit::DeltaSum(NodeWeights::new(dense.delta(l_max)).unwrap())
        };
        let inf = build_inferred(&g, &idx, &ScoringConfig::new(l_max, benefit)).unwrap();
        prop_assert_eq!(inf.inferred_count(), reference.best.len());
        for (&(s, d), &t) in &reference.best {
            let w = inf.inferred_weight(s, d).unwrap();
            prop_assert!((w - t).abs() <= 1e-12);
            prop_assert!(w > 0.0 && w <= 1.0);
        }
    }

    #[test]
    fn heuristics_nest_inside_exhaustive(
        g in graph_strategy(),
        l_max in 2usize..5,
        theta in prop::collection::vec(0.0f64..10.0, 12),
        cutoff in cutoff_strategy(),
    ) {
        let theta = NodeWeights::new(theta[..g.node_count()].to_vec()).unwrap();
        let run = |m| enumerate(&g, &theta, &EnumConfig::new(m, l_max, cutoff)).unwrap();
        let (all, h1, h2) = (run(Method::All), run(Method::H1), run(Method::H2));
        let (pa, p1, p2) = (path_set(&all), path_set(&h1), path_set(&h2));
        prop_assert!(p1.is_subset(&p2));
        prop_assert!(p2.is_subset(&pa));
        prop_assert!(h2.keys().eq(all.keys()));
        h1.validate(&g, l_max).unwrap();
        h2.validate(&g, l_max).unwrap();
    }

    #[test]
    fn output_independent_of_execution_strategy(
        g in graph_strategy(),
        l_max in 2usize..5,
        theta in prop::collection::vec(0.0f64..10.0, 12),
        cutoff in cutoff_strategy(),
    ) {
        let theta = NodeWeights::new(theta[..g.node_count()].to_vec()).unwrap();
        for m in [Method::All, Method::H1, Method::H2] {
            let mut bytes = Vec::new();
            for exec in [Exec::Sequential, Exec::Parallel] {
                let idx = enumerate(&g, &theta, &EnumConfig::new(m, l_max, cutoff).with_exec(exec)).unwrap();
                let mut buf = Vec::new();
                idx.write_to(&mut buf).unwrap();
                bytes.push(buf);
            }
            prop_assert_eq!(&bytes[0], &bytes[1]);
        }
    }
}
