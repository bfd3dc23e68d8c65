use std::collections::BTreeMap;

use proptest::prelude::*;

use persona_core::affinity::AffinityScore;
use persona_core::cluster::{hitting_times, random_walk_matrix};
use persona_core::graph::{build_affinity_graph, export_graph, parse_edge_tsv, type_pair_percentages, AffinityGraph, ExportFormat};
use persona_core::ingest::UserProfile;
use persona_core::MbtiType;

/// Edge list over up to 12 nodes as `(u, v, weight)` plus a type per node.
fn raw_graph() -> impl Strategy<Value = (Vec<usize>, Vec<(usize, usize, f64)>)> {
    (
        prop::collection::vec(0usize..16, 12),
        prop::collection::vec((0usize..12, 0usize..12, 1e-4f64..10.0), 1..40),
    )
        .prop_map(|(types, edges)| (types, edges.into_iter().filter(|(u, v, _)| u != v).collect::<Vec<_>>()))
        .prop_filter("needs an edge", |(_, e)| !e.is_empty())
}

fn graph_from(types: &[usize], edges: &[(usize, usize, f64)], name: impl Fn(usize) -> String) -> AffinityGraph {
    let mut nodes = BTreeMap::new();
    let mut es = BTreeMap::new();
    for &(u, v, w) in edges {
        nodes.insert(name(u), MbtiType::ALL[types[u]]);
        nodes.insert(name(v), MbtiType::ALL[types[v]]);
        es.insert((name(u), name(v)), w);
    }
    AffinityGraph::from_parts(nodes, es, 1e-5).unwrap()
}

proptest! {
    #[test]
    fn edge_tsv_round_trips((types, edges) in raw_graph()) {
        let g = graph_from(&types, &edges, |i| format!("user{i}"));
        let text = export_graph(&g, ExportFormat::EdgeTsv);
        let back = parse_edge_tsv(text.as_bytes(), g.threshold()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn built_graphs_respect_threshold(
        scores in prop::collection::vec((0usize..10, 0usize..10, 0.0f64..0.3), 0..60),
        threshold in 1e-3f64..0.2,
    ) {
        let profiles: Vec<UserProfile> = (0..8)
            .map(|i| UserProfile { user_id: format!("u{i}"), mbti: MbtiType::ALL[i], bot_score: 0.0 })
            .collect();
        let map: BTreeMap<(String, String), AffinityScore> = scores
            .iter()
            .filter(|(u, v, _)| u != v)
            .map(|&(u, v, s)| ((format!("u{u}"), format!("u{v}")), AffinityScore(s)))
            .collect();
        let (g, _) = build_affinity_graph(&map, &profiles, threshold).unwrap();
        prop_assert!(g.edges().values().all(|&w| w >= threshold));
        // every surviving node touches an edge and has a profile
        for id in g.node_ids() {
            prop_assert!(g.edges().keys().any(|(u, v)| u == id || v == id));
            prop_assert!(profiles.iter().any(|p| p.user_id == id));
        }
    }

    #[test]
    fn type_pairs_ignore_user_ids((types, edges) in raw_graph(), shift in 1usize..1000) {
        let a = type_pair_percentages(&graph_from(&types, &edges, |i| format!("a{i}"))).unwrap();
        let b = type_pair_percentages(&graph_from(&types, &edges, |i| format!("z{}", (i * 7 + shift) % 9973))).unwrap();
        prop_assert_eq!(a.len(), 136);
        for ((pair, x), (_, y)) in a.iter().zip(b.iter()) {
            prop_assert_eq!(x, y, "{:?}", pair);
        }
    }

    #[test]
    fn walk_matrix_is_stochastic_with_teleport((types, edges) in raw_graph(), tau in 1e-3f64..0.5) {
        let g = graph_from(&types, &edges, |i| format!("n{i:02}"));
        let p = random_walk_matrix(&g, tau).unwrap();
        let n = g.node_count();
        for row in p.entries().row_iter() {
            prop_assert!((row.sum() - 1.0).abs() <= 1e-12);
            prop_assert!(row.iter().all(|&x| x >= tau / n as f64 - 1e-15));
        }
        let h = hitting_times(&p).unwrap();
        for i in 0..n {
            prop_assert_eq!(h.get(i, i), 0.0);
            for j in (0..n).filter(|&j| j != i) {
                prop_assert!(h.get(i, j).is_finite() && h.get(i, j) > 0.0);
            }
        }
    }
}
