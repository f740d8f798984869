//! Random-graph baselines, the small-world test and power-law fitting.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DirectedGraph, VertexId};
use crate::metrics::{
    avg_clustering_undirected, component_subgraph, connected_components, path_stats_on,
    undirected_projection, PathMode, PathSampling, UndirectedGraph,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("graph has no vertexes")]
    EmptyGraph,
    #[error("link probability needs at least 2 vertexes, got {0}")]
    DegenerateGraph(usize),
    #[error("histogram has {0} distinct degrees at or above x_min, need at least 3")]
    DegenerateHistogram(usize),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
}

/// `p = 2l / n(n-1)`.
pub fn link_probability(edges: u64, vertexes: u64) -> Result<f64, TopologyError> {
    if vertexes < 2 {
        return Err(TopologyError::DegenerateGraph(vertexes as usize));
    }
    let n = vertexes as f64;
    Ok(2.0 * edges as f64 / (n * (n - 1.0)))
}

/// G(n, p) drawn from `rng` with geometric skipping over the pair sequence.
pub fn erdos_renyi_with<R: Rng>(
    n: usize,
    p: f64,
    rng: &mut R,
) -> Result<UndirectedGraph, TopologyError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(TopologyError::InvalidProbability(p));
    }
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    if p == 1.0 {
        for v in 1..n as VertexId {
            for w in 0..v {
                edges.push((v, w));
            }
        }
    } else if p > 0.0 && n > 1 {
        let log_q = (1.0 - p).ln();
        let (mut v, mut w): (i64, i64) = (1, -1);
        let n = n as i64;
        while v < n {
            let r: f64 = rng.gen();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v && v < n {
                w -= v;
                v += 1;
            }
            if v < n {
                edges.push((v as VertexId, w as VertexId));
            }
        }
    }
    Ok(UndirectedGraph::from_edges(n, edges))
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<UndirectedGraph, TopologyError> {
    erdos_renyi_with(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallWorldVerdict {
    pub c_real: f64,
    pub c_random_mean: f64,
    /// Mean shortest path of the undirected projection over finite pairs.
    pub d_real: f64,
    /// Mean over replicates of the giant-component path length.
    pub d_random_mean: f64,
    /// Mean over replicates of the path length over all finite pairs.
    pub d_random_mean_all_pairs: f64,
    pub replicates: usize,
    pub seed: u64,
    pub p: f64,
    /// `c_real / c_random_mean`; absent when the baseline clustering is 0.
    pub clustering_ratio: Option<f64>,
    pub path_ratio: Option<f64>,
    pub paths_sampled: bool,
    pub verdict: bool,
}

/// Thresholds: clustering at least 10x the baseline, path length at most
/// 10x the baseline.
pub const CLUSTERING_FACTOR: f64 = 10.0;
pub const PATH_FACTOR: f64 = 10.0;

pub fn small_world_rule(c_real: f64, c_random: f64, d_real: f64, d_random: f64) -> bool {
    let clustered = if c_random == 0.0 {
        c_real > 0.0
    } else {
        c_real >= CLUSTERING_FACTOR * c_random
    };
    clustered && d_real <= PATH_FACTOR * d_random
}

struct Baseline {
    clustering: f64,
    giant_path: f64,
    all_path: f64,
}

fn baseline(n: usize, p: f64, seed: u64, stream: u64, sampling: PathSampling) -> Baseline {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let er = erdos_renyi_with(n, p, &mut rng).expect("p validated by caller");
    let comps = connected_components(&er);
    let giant = component_subgraph(&er, &comps, comps.giant);
    Baseline {
        clustering: avg_clustering_undirected(&er).unwrap_or(0.0),
        giant_path: path_stats_on(giant.adjacency(), PathMode::Undirected, sampling)
            .avg_shortest_path,
        all_path: path_stats_on(er.adjacency(), PathMode::Undirected, sampling).avg_shortest_path,
    }
}

/// Compares `g` against `replicates` G(n, p) graphs of equal density.
/// Replicate `i` draws from ChaCha stream `i + 1` of `seed`.
pub fn small_world_test_undirected(
    g: &UndirectedGraph,
    replicates: usize,
    seed: u64,
    sampling: PathSampling,
) -> Result<SmallWorldVerdict, TopologyError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(TopologyError::EmptyGraph);
    }
    let replicates = replicates.max(1);
    let p = if n < 2 {
        0.0
    } else {
        link_probability(g.edge_count() as u64, n as u64)?
    };
    let c_real = avg_clustering_undirected(g).unwrap_or(0.0);
    let real_paths = path_stats_on(g.adjacency(), PathMode::Undirected, sampling);
    let runs: Vec<Baseline> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| baseline(n, p, seed, i + 1, sampling))
        .collect();
    let mean = |f: fn(&Baseline) -> f64| runs.iter().map(f).sum::<f64>() / replicates as f64;
    let c_random_mean = mean(|b| b.clustering);
    let d_random_mean = mean(|b| b.giant_path);
    let d_real = real_paths.avg_shortest_path;
    let ratio = |a: f64, b: f64| if b == 0.0 { None } else { Some(a / b) };
    Ok(SmallWorldVerdict {
        c_real,
        c_random_mean,
        d_real,
        d_random_mean,
        d_random_mean_all_pairs: mean(|b| b.all_path),
        replicates,
        seed,
        p,
        clustering_ratio: ratio(c_real, c_random_mean),
        path_ratio: ratio(d_real, d_random_mean),
        paths_sampled: real_paths.sampled,
        verdict: small_world_rule(c_real, c_random_mean, d_real, d_random_mean),
    })
}

pub fn small_world_test(
    g: &DirectedGraph,
    replicates: usize,
    seed: u64,
    sampling: PathSampling,
) -> Result<SmallWorldVerdict, TopologyError> {
    small_world_test_undirected(&undirected_projection(g), replicates, seed, sampling)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeKind {
    In,
    Out,
    #[default]
    Total,
}

impl DegreeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DegreeKind::In => "in",
            DegreeKind::Out => "out",
            DegreeKind::Total => "total",
        }
    }
}

/// `(degree, count)` pairs in increasing degree; zero counts omitted.
pub fn degree_histogram(g: &DirectedGraph, which: DegreeKind) -> Vec<(usize, usize)> {
    let degree = |v| match which {
        DegreeKind::In => g.in_degree(v),
        DegreeKind::Out => g.out_degree(v),
        DegreeKind::Total => g.in_degree(v) + g.out_degree(v),
    };
    histogram_of(g.vertices().map(degree))
}

pub fn histogram_of(values: impl IntoIterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
    for d in values {
        *counts.entry(d).or_default() += 1;
    }
    counts.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    LoglogRegression,
    DiscreteMle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitEstimate {
    pub method: FitMethod,
    pub alpha: f64,
    /// R² for the regression, KS distance for the MLE.
    pub goodness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub x_min: usize,
    /// Primary estimate: `-slope` of log(count) against log(degree).
    pub regression: FitEstimate,
    /// Exact discrete maximum likelihood.
    pub mle: FitEstimate,
    /// Closed-form approximation `1 + m / Σ ln(k / (x_min - 1/2))`.
    pub mle_approx_alpha: f64,
    pub observations: u64,
    pub histogram: Vec<(usize, usize)>,
}

/// Hurwitz zeta `Σ_{k≥0} (a+k)^-s` for `s > 1`, `a > 0`, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    const N: usize = 12;
    // B_2j / (2j)!
    const B: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let mut sum: f64 = (0..N).map(|k| (a + k as f64).powf(-s)).sum();
    let x = a + N as f64;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial s(s+1)...(s+2j-2) times x^(-s-2j+1)
    let mut factor = s * x.powf(-s - 1.0);
    for (j, b) in B.iter().enumerate() {
        sum += b * factor;
        let k = (2 * j) as f64;
        factor *= (s + k + 1.0) * (s + k + 2.0) / (x * x);
    }
    sum
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        }
    }
    (lo + hi) / 2.0
}

const MLE_ALPHA_RANGE: (f64, f64) = (1.0001, 12.0);

/// Regression and discrete-MLE power-law estimates over degrees `>= x_min`.
pub fn fit_power_law(hist: &[(usize, usize)], x_min: usize) -> Result<PowerLawFit, TopologyError> {
    let x_min = x_min.max(1);
    let tail: Vec<(usize, usize)> = hist
        .iter()
        .copied()
        .filter(|&(k, c)| k >= x_min && c > 0)
        .collect();
    if tail.len() < 3 {
        return Err(TopologyError::DegenerateHistogram(tail.len()));
    }

    let pts: Vec<(f64, f64)> = tail
        .iter()
        .map(|&(k, c)| ((k as f64).ln(), (c as f64).ln()))
        .collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };

    let m: f64 = tail.iter().map(|&(_, c)| c as f64).sum();
    let sum_ln: f64 = tail.iter().map(|&(k, c)| c as f64 * (k as f64).ln()).sum();
    let shifted: f64 = tail
        .iter()
        .map(|&(k, c)| c as f64 * (k as f64 / (x_min as f64 - 0.5)).ln())
        .sum();
    let a = x_min as f64;
    let log_lik = |alpha: f64| -alpha * sum_ln - m * hurwitz_zeta(alpha, a).ln();
    let alpha = golden_max(log_lik, MLE_ALPHA_RANGE.0, MLE_ALPHA_RANGE.1, 1e-9);

    // KS distance between the empirical and fitted CDFs on the tail.
    let z = hurwitz_zeta(alpha, a);
    let mut seen = 0.0;
    let mut ks: f64 = 0.0;
    for &(k, c) in &tail {
        seen += c as f64;
        let model = 1.0 - hurwitz_zeta(alpha, k as f64 + 1.0) / z;
        ks = ks.max((seen / m - model).abs());
    }

    Ok(PowerLawFit {
        x_min,
        regression: FitEstimate {
            method: FitMethod::LoglogRegression,
            alpha: -slope,
            goodness: r2,
        },
        mle: FitEstimate {
            method: FitMethod::DiscreteMle,
            alpha,
            goodness: ks,
        },
        mle_approx_alpha: 1.0 + m / shifted,
        observations: m as u64,
        histogram: hist.to_vec(),
    })
}

/// `degree,count` plot data.
pub fn write_histogram_csv<W: Write>(hist: &[(usize, usize)], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["degree", "count"])?;
    for (k, c) in hist {
        w.write_record([k.to_string(), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `method,alpha,goodness,x_min` plot data.
pub fn write_fit_csv<W: Write>(fit: &PowerLawFit, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["method", "alpha", "goodness", "x_min"])?;
    let rows = [
        (
            "loglog_regression",
            fit.regression.alpha,
            fit.regression.goodness,
        ),
        ("discrete_mle", fit.mle.alpha, fit.mle.goodness),
        ("discrete_mle_approx", fit.mle_approx_alpha, f64::NAN),
    ];
    for (name, alpha, goodness) in rows {
        let goodness = if goodness.is_nan() {
            String::new()
        } else {
            goodness.to_string()
        };
        w.write_record([
            name.to_string(),
            alpha.to_string(),
            goodness,
            fit.x_min.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    #[test]
    fn link_probability_edges() {
        assert_eq!(link_probability(0, 10).unwrap(), 0.0);
        assert_eq!(link_probability(45, 10).unwrap(), 1.0);
        assert_eq!(
            link_probability(0, 1),
            Err(TopologyError::DegenerateGraph(1))
        );
    }

    #[test]
    fn er_extremes() {
        assert_eq!(erdos_renyi(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(10, 1.0, 1).unwrap().edge_count(), 45);
        assert!(erdos_renyi(10, 1.5, 1).is_err());
        assert_eq!(
            erdos_renyi(200, 0.1, 9).unwrap(),
            erdos_renyi(200, 0.1, 9).unwrap()
        );
    }

    #[test]
    fn zeta_matches_riemann() {
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((hurwitz_zeta(2.0, 1.0) - z2).abs() < 1e-12);
        assert!((hurwitz_zeta(2.0, 2.0) - (z2 - 1.0)).abs() < 1e-12);
        assert!((hurwitz_zeta(4.0, 1.0) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((hurwitz_zeta(1.5, 1.0) - 2.612_375_348_685_488).abs() < 1e-10);
    }

    #[test]
    fn histograms() {
        let mut b = GraphBuilder::new();
        b.add_labeled_edge("a", "b");
        let g = b.finish();
        assert_eq!(degree_histogram(&g, DegreeKind::Total), [(1, 2)]);
        assert_eq!(degree_histogram(&g, DegreeKind::In), [(0, 1), (1, 1)]);
    }

    #[test]
    fn degenerate_histogram() {
        assert_eq!(
            fit_power_law(&[(3, 10)], 1),
            Err(TopologyError::DegenerateHistogram(1))
        );
        assert!(fit_power_law(&[(1, 4), (2, 2)], 1).is_err());
    }

    #[test]
    fn verdict_rule() {
        assert!(small_world_rule(0.5, 0.04, 10.0, 3.0));
        assert!(small_world_rule(0.2, 0.0, 19.0, 3.5));
        assert!(!small_world_rule(0.0, 0.0, 1.0, 1.0));
        assert!(!small_world_rule(0.1, 0.1, 1.0, 1.0));
        assert!(!small_world_rule(0.5, 0.01, 100.0, 3.0));
    }
}
