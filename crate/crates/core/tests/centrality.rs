mod common;

use callnet_core::centrality::{
    betweenness, pagerank, top_k, CentralityError, CentralityVector, PageRankOptions,
};
use callnet_testkit::oracle;
use common::digraph;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn brandes_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for trial in 0..100 {
        let n = rng.gen_range(2..=40);
        let p = rng.gen_range(0.02..0.3);
        let edges = oracle::random_digraph(&mut rng, n, p);
        let expected = oracle::brute_force_betweenness(&oracle::adjacency_matrix(n, &edges, false));
        let got = betweenness(&digraph(n, &edges), true, false).unwrap();
        for (v, (x, y)) in got.scores.iter().zip(&expected).enumerate() {
            assert!(
                (x - y).abs() <= 1e-9,
                "trial {trial} vertex {v}: {x} vs {y}"
            );
        }
    }
}

#[test]
fn undirected_betweenness_counts_pairs_once() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let n = rng.gen_range(3..=25);
        let edges = oracle::random_graph(&mut rng, n, 0.2);
        let brute = oracle::brute_force_betweenness(&oracle::adjacency_matrix(n, &edges, true));
        let got = betweenness(&digraph(n, &edges), false, false).unwrap();
        for (x, y) in got.scores.iter().zip(&brute) {
            assert!((x - y / 2.0).abs() <= 1e-9);
        }
        let norm = betweenness(&digraph(n, &edges), false, true).unwrap();
        let scale = 2.0 / ((n - 1) * (n - 2)) as f64;
        for (x, y) in norm.scores.iter().zip(&got.scores) {
            assert!((x - y * scale).abs() <= 1e-12);
        }
    }
}

#[test]
fn betweenness_examples() {
    let path = digraph(3, &[(0, 1), (1, 2)]);
    assert_eq!(
        betweenness(&path, true, false).unwrap().scores,
        [0.0, 1.0, 0.0]
    );
    let cycle = betweenness(&digraph(3, &[(0, 1), (1, 2), (2, 0)]), true, false).unwrap();
    assert!(cycle.scores.iter().all(|&x| x == cycle.scores[0]));
    assert_eq!(
        betweenness(&digraph(0, &[]), true, false),
        Err(CentralityError::EmptyGraph)
    );
}

#[test]
fn pagerank_two_node_closed_form() {
    let g = digraph(2, &[(0, 1)]);
    for d in [0.5, 0.85, 0.95] {
        let pr = pagerank(
            &g,
            PageRankOptions {
                damping: d,
                tol: 1e-14,
                max_iter: 1000,
            },
        )
        .unwrap();
        let (a, b) = oracle::pagerank_two_node(d);
        assert!(pr.converged);
        assert!((pr.vector.scores[0] - a).abs() < 1e-8);
        assert!((pr.vector.scores[1] - b).abs() < 1e-8);
    }
}

#[test]
fn pagerank_cycle_and_star() {
    let pr = pagerank(
        &digraph(3, &[(0, 1), (1, 2), (2, 0)]),
        PageRankOptions::default(),
    )
    .unwrap();
    assert!(pr
        .vector
        .scores
        .iter()
        .all(|x| (x - 1.0 / 3.0).abs() < 1e-9));
    let star: Vec<_> = (1..8).map(|i| (i, 0)).collect();
    let pr = pagerank(&digraph(8, &star), PageRankOptions::default()).unwrap();
    assert!(pr.vector.scores[1..]
        .iter()
        .all(|&x| x < pr.vector.scores[0]));
}

#[test]
fn pagerank_small_damping_is_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let edges = oracle::random_digraph(&mut rng, 30, 0.1);
    let pr = pagerank(
        &digraph(30, &edges),
        PageRankOptions {
            damping: 1e-9,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(pr
        .vector
        .scores
        .iter()
        .all(|x| (x - 1.0 / 30.0).abs() < 1e-8));
}

#[test]
fn top_k_examples() {
    let g = digraph(3, &[(0, 1)]);
    let v = CentralityVector {
        measure: "t".into(),
        scores: vec![0.5, 0.5, 0.1],
        normalized: false,
    };
    assert_eq!(top_k(&g, &v, 10).len(), 3);
    let labels: Vec<_> = top_k(&g, &v, 2).into_iter().map(|r| r.label).collect();
    assert_eq!(labels, ["v000", "v001"]);
}

fn arb_digraph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..30).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..90)))
}

proptest! {
    #[test]
    fn pagerank_sums_to_one((n, edges) in arb_digraph()) {
        let pr = pagerank(&digraph(n, &edges), PageRankOptions::default()).unwrap();
        prop_assert!((pr.vector.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(pr.vector.scores.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn pagerank_relabel_invariant((n, edges) in arb_digraph(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let relabeled: Vec<_> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let a = pagerank(&digraph(n, &edges), PageRankOptions::default()).unwrap();
        let b = pagerank(&digraph(n, &relabeled), PageRankOptions::default()).unwrap();
        for v in 0..n {
            prop_assert!((a.vector.scores[v] - b.vector.scores[perm[v]]).abs() < 1e-7);
        }
    }

    #[test]
    fn betweenness_nonnegative((n, edges) in arb_digraph()) {
        let bc = betweenness(&digraph(n, &edges), true, true).unwrap();
        prop_assert!(bc.scores.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn top_k_total_order((n, edges) in arb_digraph(), k in 1usize..40) {
        let g = digraph(n, &edges);
        let pr = pagerank(&g, PageRankOptions::default()).unwrap();
        let top = top_k(&g, &pr.vector, k);
        prop_assert_eq!(top.len(), k.min(n));
        for w in top.windows(2) {
            prop_assert!(w[0].score > w[1].score || (w[0].score == w[1].score && w[0].label < w[1].label));
        }
        prop_assert_eq!(top, top_k(&g, &pr.vector, k));
    }
}
