mod common;

use callnet_core::metrics::{
    avg_clustering, bfs_distances, components, connected_components, degrees, giant_component,
    local_clustering_coefficients, path_stats_on, shortest_path_stats, undirected_projection,
    MetricsError, PathMode, PathSampling,
};
use callnet_core::topology::erdos_renyi;
use callnet_testkit::oracle;
use common::{digraph, undirected};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn degree_examples() {
    let g = digraph(2, &[(0, 1)]);
    let d = degrees(&g);
    assert_eq!(
        (
            d.in_degree[0],
            d.out_degree[0],
            d.in_degree[1],
            d.out_degree[1]
        ),
        (0, 1, 1, 0)
    );
    let loop_only = digraph(1, &[(0, 0)]);
    assert_eq!(degrees(&loop_only).total_degree, [2]);
}

#[test]
fn projection_examples() {
    let g = digraph(2, &[(0, 1), (1, 0)]);
    assert_eq!(undirected_projection(&g).edge_count(), 1);
    assert_eq!(
        undirected_projection(&digraph(1, &[(0, 0)])).edge_count(),
        0
    );
}

#[test]
fn projection_matches_matrix_or() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..20 {
        let edges = oracle::random_digraph(&mut rng, 50, 0.05);
        let a = oracle::adjacency_matrix(50, &edges, false);
        let u = undirected_projection(&digraph(50, &edges));
        for i in 0..50 {
            for j in 0..50 {
                let expected = i != j && (a[i][j] || a[j][i]);
                assert_eq!(u.has_edge(i as u32, j as u32), expected, "{i} {j}");
            }
        }
    }
}

#[test]
fn clustering_examples() {
    assert_eq!(
        avg_clustering(&digraph(3, &[(0, 1), (1, 2), (2, 0)])).unwrap(),
        1.0
    );
    assert_eq!(avg_clustering(&digraph(3, &[(0, 1), (1, 2)])).unwrap(), 0.0);
    assert_eq!(
        avg_clustering(&digraph(0, &[])),
        Err(MetricsError::EmptyGraph)
    );
}

#[test]
fn clustering_matches_triangle_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let edges = oracle::random_graph(&mut rng, 30, 0.2);
        let a = oracle::adjacency_matrix(30, &edges, true);
        let expected = oracle::local_clustering(&a);
        let got = local_clustering_coefficients(&undirected(30, &edges));
        for (x, y) in got.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn path_examples() {
    let path = digraph(3, &[(0, 1), (1, 2)]);
    for mode in [PathMode::Directed, PathMode::Undirected] {
        let s = shortest_path_stats(&path, mode, PathSampling::Exact).unwrap();
        assert!((s.avg_shortest_path - 4.0 / 3.0).abs() < 1e-12, "{mode:?}");
        assert_eq!(s.diameter, 2);
    }
    let directed = shortest_path_stats(&path, PathMode::Directed, PathSampling::Exact).unwrap();
    assert_eq!(directed.reachable_pairs, 3);
    assert!(
        shortest_path_stats(&digraph(0, &[]), PathMode::Directed, PathSampling::Exact).is_err()
    );
}

#[test]
fn paths_match_floyd_warshall() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for trial in 0..30 {
        let edges = oracle::random_digraph(&mut rng, 20, 0.08);
        let g = digraph(20, &edges);
        for (mode, sym) in [(PathMode::Directed, false), (PathMode::Undirected, true)] {
            let d = oracle::floyd_warshall(&oracle::adjacency_matrix(20, &edges, sym));
            let (avg, diam, pairs) = oracle::path_summary(&d);
            let s = shortest_path_stats(&g, mode, PathSampling::Exact).unwrap();
            assert_eq!(s.avg_shortest_path, avg, "trial {trial} {mode:?}");
            assert_eq!(s.diameter as u64, diam);
            assert_eq!(s.reachable_pairs, pairs);
            assert!(s.diameter as f64 >= s.avg_shortest_path);
        }
    }
}

#[test]
fn sampled_paths_are_seeded() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let edges = oracle::random_graph(&mut rng, 300, 0.02);
    let u = undirected(300, &edges);
    let sampling = PathSampling::Sampled {
        sources: 40,
        seed: 11,
    };
    let a = path_stats_on(u.adjacency(), PathMode::Undirected, sampling);
    let b = path_stats_on(u.adjacency(), PathMode::Undirected, sampling);
    assert_eq!(a, b);
    assert!(a.sampled);
    assert_eq!((a.sources, a.sample_seed), (40, Some(11)));
    let exact = path_stats_on(u.adjacency(), PathMode::Undirected, PathSampling::Exact);
    assert!((a.avg_shortest_path - exact.avg_shortest_path).abs() / exact.avg_shortest_path < 0.1);
    // more sources than vertexes falls back to exact
    let all = path_stats_on(
        u.adjacency(),
        PathMode::Undirected,
        PathSampling::Sampled {
            sources: 1000,
            seed: 1,
        },
    );
    assert_eq!(all.avg_shortest_path, exact.avg_shortest_path);
    assert!(!all.sampled);
}

#[test]
fn component_examples() {
    let two = digraph(4, &[(0, 1), (2, 3)]);
    assert_eq!(components(&two).count(), 2);
    let tri = components(&digraph(3, &[(0, 1), (1, 2), (2, 0)]));
    assert_eq!((tri.count(), tri.giant_fraction), (1, 1.0));
}

#[test]
fn components_match_union_find() {
    for seed in 0..5 {
        let er = erdos_renyi(1000, 0.0001, seed).unwrap();
        let edges: Vec<(usize, usize)> =
            er.edges().map(|(u, v)| (u as usize, v as usize)).collect();
        let c = connected_components(&er);
        let roots = oracle::union_find_components(1000, &edges);
        assert!(c.count() > 1);
        // same partition: a bijection between labels and roots
        let mut map = std::collections::HashMap::new();
        for v in 0..1000 {
            assert_eq!(*map.entry(c.label[v]).or_insert(roots[v]), roots[v]);
        }
        let distinct: std::collections::BTreeSet<_> = roots.iter().collect();
        assert_eq!(distinct.len(), c.count());
    }
}

#[test]
fn giant_component_subgraph() {
    let g = digraph(6, &[(0, 1), (1, 2), (3, 4)]);
    let giant = giant_component(&g);
    assert_eq!(giant.vertex_count(), 3);
    assert_eq!(giant.labels(), ["v000", "v001", "v002"]);
}

fn arb_digraph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..25).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..80)))
}

proptest! {
    #[test]
    fn handshake((n, edges) in arb_digraph()) {
        let g = digraph(n, &edges);
        let d = degrees(&g);
        prop_assert_eq!(d.total_degree.iter().sum::<usize>(), 2 * g.edge_count());
        prop_assert_eq!(d.in_degree.iter().sum::<usize>(), g.edge_count());
        prop_assert_eq!(d.out_degree.iter().sum::<usize>(), g.edge_count());
    }

    #[test]
    fn clustering_relabel_invariant((n, edges) in arb_digraph(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let relabeled: Vec<_> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let a = avg_clustering(&digraph(n, &edges)).unwrap();
        let b = avg_clustering(&digraph(n, &relabeled)).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn triangle_inequality((n, edges) in arb_digraph()) {
        let g = digraph(n, &edges);
        let adj: Vec<Vec<u32>> = g.vertices().map(|v| g.out_neighbors(v).to_vec()).collect();
        let d: Vec<Vec<Option<u32>>> = (0..n as u32).map(|s| bfs_distances(&adj, s)).collect();
        let fw = oracle::floyd_warshall(&oracle::adjacency_matrix(n, &edges, false));
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(d[u][v].map_or(oracle::INF, u64::from), fw[u][v]);
                for w in 0..n {
                    if let (Some(a), Some(b)) = (d[u][v], d[v][w]) {
                        prop_assert!(d[u][w].is_some_and(|c| c <= a + b));
                    }
                }
            }
        }
    }
}
