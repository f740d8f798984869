mod common;

use callnet_core::metrics::{avg_clustering_undirected, PathSampling};
use callnet_core::topology::{
    degree_histogram, erdos_renyi, fit_power_law, histogram_of, link_probability, small_world_test,
    small_world_test_undirected, write_fit_csv, write_histogram_csv, DegreeKind, TopologyError,
};
use callnet_testkit::oracle;
use common::{clique_edges, digraph, undirected};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn link_probability_hibernate_counts() {
    let p = link_probability(57_919, 27_556).unwrap();
    assert!((p - 1.525e-4).abs() < 1e-7, "{p}");
}

#[test]
fn er_mean_degree_within_three_sigma() {
    let (n, p, seeds) = (5_000usize, 1.525e-4, 20u64);
    let pairs = (n * (n - 1) / 2) as f64;
    let total: usize = (0..seeds)
        .map(|s| erdos_renyi(n, p, s).unwrap().edge_count())
        .sum();
    let mean_edges = total as f64 / seeds as f64;
    let sigma = (pairs * p * (1.0 - p) / seeds as f64).sqrt();
    assert!(
        (mean_edges - pairs * p).abs() <= 3.0 * sigma,
        "{mean_edges} vs {}",
        pairs * p
    );
    let mean_degree = 2.0 * mean_edges / n as f64;
    assert!((mean_degree - p * (n - 1) as f64).abs() <= 3.0 * 2.0 * sigma / n as f64);
}

#[test]
fn er_edge_count_moments() {
    // chi-square style check of the edge-count variance as well as the mean
    let (n, p, seeds) = (200usize, 0.05, 200u64);
    let pairs = (n * (n - 1) / 2) as f64;
    let counts: Vec<f64> = (0..seeds)
        .map(|s| erdos_renyi(n, p, 1000 + s).unwrap().edge_count() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / seeds as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (seeds - 1) as f64;
    let expected_var = pairs * p * (1.0 - p);
    assert!((mean - pairs * p).abs() <= 3.0 * (expected_var / seeds as f64).sqrt());
    assert!(
        (var / expected_var - 1.0).abs() < 0.3,
        "{var} vs {expected_var}"
    );
}

#[test]
fn er_is_seeded() {
    assert_eq!(
        erdos_renyi(300, 0.02, 5).unwrap(),
        erdos_renyi(300, 0.02, 5).unwrap()
    );
    assert_ne!(
        erdos_renyi(300, 0.02, 5).unwrap(),
        erdos_renyi(300, 0.02, 6).unwrap()
    );
}

#[test]
fn ring_lattice_is_small_world_against_er() {
    let lattice = undirected(100, &oracle::ring_lattice(100, 4));
    assert_eq!(avg_clustering_undirected(&lattice).unwrap(), 0.5);
    let v = small_world_test_undirected(&lattice, 5, 0, PathSampling::Exact).unwrap();
    assert!(v.verdict, "{v:?}");
    assert_eq!(v.c_real, 0.5);
    assert!((v.p - 200.0 / 4950.0).abs() < 1e-15);
}

#[test]
fn er_against_itself_is_not_small_world() {
    let er = erdos_renyi(400, 0.03, 17).unwrap();
    let v = small_world_test_undirected(&er, 5, 1, PathSampling::Exact).unwrap();
    assert!(!v.verdict, "{v:?}");
    let ratio = v.clustering_ratio.unwrap();
    assert!((0.5..2.0).contains(&ratio), "{ratio}");
}

#[test]
fn small_world_deterministic_and_replicates() {
    let edges = oracle::ring_lattice(60, 6);
    let g = digraph(60, &edges);
    let a = small_world_test(&g, 3, 9, PathSampling::Exact).unwrap();
    assert_eq!(a, small_world_test(&g, 3, 9, PathSampling::Exact).unwrap());
    assert_eq!(a.replicates, 3);
    assert!(small_world_test(&digraph(0, &[]), 3, 9, PathSampling::Exact).is_err());
}

#[test]
fn histogram_examples() {
    assert_eq!(
        degree_histogram(&digraph(2, &[(0, 1)]), DegreeKind::Total),
        [(1, 2)]
    );
    assert_eq!(
        degree_histogram(&digraph(4, &clique_edges(0, 4)), DegreeKind::Total),
        [(3, 4)]
    );
}

#[test]
fn regression_recovers_planted_slope() {
    let hist: Vec<(usize, usize)> = (1..=100)
        .map(|k| (k, (1e6 / (k * k) as f64).round() as usize))
        .collect();
    let fit = fit_power_law(&hist, 1).unwrap();
    assert!(
        (fit.regression.alpha - 2.0).abs() <= 0.05,
        "{}",
        fit.regression.alpha
    );
    assert!(fit.regression.goodness > 0.99);
}

#[test]
fn mle_recovers_sampled_exponent() {
    let sampler = oracle::PowerLawSampler::new(2.6, 1, 1_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let hist = histogram_of((0..100_000).map(|_| sampler.sample(&mut rng)));
    let fit = fit_power_law(&hist, 1).unwrap();
    assert!((fit.mle.alpha - 2.6).abs() <= 0.1, "{}", fit.mle.alpha);
    assert!(fit.mle.goodness < 0.01);
    assert_eq!(fit.observations, 100_000);
}

#[test]
fn mle_with_larger_x_min() {
    let sampler = oracle::PowerLawSampler::new(2.2, 3, 1_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let hist = histogram_of((0..100_000).map(|_| sampler.sample(&mut rng)));
    let fit = fit_power_law(&hist, 3).unwrap();
    assert!((fit.mle.alpha - 2.2).abs() <= 0.1, "{}", fit.mle.alpha);
}

#[test]
fn degenerate_histogram() {
    assert_eq!(
        fit_power_law(&[(4, 100)], 1),
        Err(TopologyError::DegenerateHistogram(1))
    );
}

#[test]
fn plot_data_csv() {
    let hist = vec![(1, 50), (2, 12), (3, 5), (4, 3)];
    let mut out = Vec::new();
    write_histogram_csv(&hist, &mut out).unwrap();
    assert_eq!(
        String::from_utf8(out).unwrap(),
        "degree,count\n1,50\n2,12\n3,5\n4,3\n"
    );
    let mut out = Vec::new();
    write_fit_csv(&fit_power_law(&hist, 1).unwrap(), &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("method,alpha,goodness,x_min\nloglog_regression,"));
}

proptest! {
    #[test]
    fn link_probability_in_unit_interval(n in 2u64..10_000, frac in 0.0f64..=1.0) {
        let max = n * (n - 1) / 2;
        let l = (max as f64 * frac) as u64;
        let p = link_probability(l, n).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn histogram_counts_sum_to_n(edges in proptest::collection::vec((0usize..20, 0usize..20), 0..60)) {
        let g = digraph(20, &edges);
        for which in [DegreeKind::In, DegreeKind::Out, DegreeKind::Total] {
            let h = degree_histogram(&g, which);
            prop_assert_eq!(h.iter().map(|(_, c)| c).sum::<usize>(), 20);
            prop_assert!(h.iter().all(|&(_, c)| c > 0));
        }
    }
}
