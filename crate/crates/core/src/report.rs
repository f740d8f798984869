//! Assembly and rendering of the analysis report.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::{self, CentralityError, PageRankOptions, RankedVertex};
use crate::community::{self, CommunityError, Partition};
use crate::graph::DirectedGraph;
use crate::metrics::{self, MetricsError, PathMode, PathSampling, PathStats};
use crate::topology::{self, DegreeKind, FitEstimate, SmallWorldVerdict, TopologyError};

pub const TOOL_NAME: &str = "callnet";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error("graph-core: {0}")]
    Metrics(#[from] MetricsError),
    #[error("centrality: {0}")]
    Centrality(#[from] CentralityError),
    #[error("community: {0}")]
    Community(#[from] CommunityError),
    #[error("topology-suite: {0}")]
    Topology(#[from] TopologyError),
}

/// Optional pipeline stages; each can be skipped, which marks the report
/// incomplete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Paths,
    Betweenness,
    Pagerank,
    Community,
    SmallWorld,
    PowerLaw,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Paths,
        Stage::Betweenness,
        Stage::Pagerank,
        Stage::Community,
        Stage::SmallWorld,
        Stage::PowerLaw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Paths => "paths",
            Stage::Betweenness => "betweenness",
            Stage::Pagerank => "pagerank",
            Stage::Community => "community",
            Stage::SmallWorld => "small-world",
            Stage::PowerLaw => "power-law",
        }
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Stage::ALL.iter().map(|s| s.as_str()).collect();
                format!("unknown stage {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOptions {
    pub input: String,
    pub seed: u64,
    pub replicates: usize,
    pub top_k: usize,
    pub sampling: PathSampling,
    pub x_min: usize,
    pub resolution: f64,
    pub pagerank: PageRankOptions,
    pub skip: BTreeSet<Stage>,
    /// Recorded verbatim in the provenance block when set.
    pub timestamp: Option<String>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            input: String::new(),
            seed: 0,
            replicates: 5,
            top_k: 10,
            sampling: PathSampling::Auto,
            x_min: 1,
            resolution: 1.0,
            pagerank: PageRankOptions::default(),
            skip: BTreeSet::new(),
            timestamp: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub input: String,
    pub seed: u64,
    pub louvain_seed: u64,
    pub small_world_seed: u64,
    pub replicates: usize,
    pub top_k: usize,
    /// `auto`, `exact` or `sampled`.
    pub path_sampling: String,
    pub sampled_sources: Option<usize>,
    pub path_sample_seed: Option<u64>,
    pub x_min: usize,
    pub resolution: f64,
    pub pagerank_damping: f64,
    pub pagerank_tol: f64,
    pub pagerank_max_iter: usize,
    pub skipped_stages: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub method_vertexes: usize,
    pub class_vertexes: usize,
    /// m / n on the directed graph.
    pub avg_degree: f64,
    /// Projected edge count / n.
    pub avg_degree_undirected: f64,
    pub avg_clustering: f64,
    /// Directed, over finite ordered pairs.
    pub avg_shortest_path: Option<f64>,
    pub diameter: Option<u32>,
    pub avg_shortest_path_undirected: Option<f64>,
    pub diameter_undirected: Option<u32>,
    pub modularity: Option<f64>,
    pub community_count: Option<usize>,
    pub component_count: usize,
    pub giant_component_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSection {
    pub directed: PathStats,
    pub undirected: PathStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunitySection {
    pub count: usize,
    pub modularity: f64,
    pub mean_size: f64,
    pub top_k: usize,
    pub top_k_share: f64,
    pub largest_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOutcome {
    pub degree: DegreeKind,
    pub histogram: Vec<(usize, usize)>,
    pub x_min: usize,
    pub observations: Option<u64>,
    pub regression: Option<FitEstimate>,
    pub mle: Option<FitEstimate>,
    pub mle_approx_alpha: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawSection {
    pub total: FitOutcome,
    pub in_degree: FitOutcome,
    pub out_degree: FitOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageRankRun {
    pub iterations: usize,
    pub converged: bool,
    pub last_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopLists {
    pub betweenness: Option<Vec<RankedVertex>>,
    pub degree: Vec<RankedVertex>,
    pub pagerank: Option<Vec<RankedVertex>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub provenance: Provenance,
    pub summary: NetworkSummary,
    pub paths: Option<PathSection>,
    pub communities: Option<CommunitySection>,
    pub small_world: Option<SmallWorldVerdict>,
    pub power_law: Option<PowerLawSection>,
    pub pagerank_run: Option<PageRankRun>,
    pub top: TopLists,
    /// Stages skipped by flag; empty for a complete report.
    pub incomplete: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub struct Analysis {
    pub report: AnalysisReport,
    pub partition: Option<Partition>,
}

fn fit_outcome(g: &DirectedGraph, which: DegreeKind, x_min: usize) -> FitOutcome {
    let histogram = topology::degree_histogram(g, which);
    let mut out = FitOutcome {
        degree: which,
        x_min: x_min.max(1),
        histogram,
        observations: None,
        regression: None,
        mle: None,
        mle_approx_alpha: None,
        error: None,
    };
    match topology::fit_power_law(&out.histogram, x_min) {
        Ok(fit) => {
            out.observations = Some(fit.observations);
            out.regression = Some(fit.regression);
            out.mle = Some(fit.mle);
            out.mle_approx_alpha = Some(fit.mle_approx_alpha);
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

/// Runs every stage not listed in `opts.skip` and assembles the report.
pub fn analyze(g: &DirectedGraph, opts: &AnalyzeOptions) -> Result<Analysis, AnalyzeError> {
    if g.is_empty() {
        return Err(MetricsError::EmptyGraph.into());
    }
    let runs = |s: Stage| !opts.skip.contains(&s);
    let n = g.vertex_count();
    let projection = metrics::undirected_projection(g);
    let comps = metrics::connected_components(&projection);
    let method_vertexes = g
        .vertices()
        .filter(|&v| g.kind(v) == crate::graph::VertexKind::Method)
        .count();

    let paths = if runs(Stage::Paths) {
        Some(PathSection {
            directed: metrics::shortest_path_stats(g, PathMode::Directed, opts.sampling)?,
            undirected: metrics::path_stats_on(
                projection.adjacency(),
                PathMode::Undirected,
                opts.sampling,
            ),
        })
    } else {
        None
    };

    let partition = if runs(Stage::Community) {
        Some(community::louvain_undirected(
            &projection,
            opts.resolution,
            opts.seed,
        )?)
    } else {
        None
    };
    let communities = partition.as_ref().map(|p| {
        let dist = community::community_size_distribution(p, opts.top_k);
        CommunitySection {
            count: p.count,
            modularity: p.modularity,
            mean_size: dist.mean_size,
            top_k: dist.top_k,
            top_k_share: dist.top_k_share,
            largest_sizes: dist.sizes.into_iter().take(opts.top_k).collect(),
        }
    });

    let small_world = if runs(Stage::SmallWorld) {
        Some(topology::small_world_test_undirected(
            &projection,
            opts.replicates,
            opts.seed,
            opts.sampling,
        )?)
    } else {
        None
    };

    let power_law = runs(Stage::PowerLaw).then(|| PowerLawSection {
        total: fit_outcome(g, DegreeKind::Total, opts.x_min),
        in_degree: fit_outcome(g, DegreeKind::In, opts.x_min),
        out_degree: fit_outcome(g, DegreeKind::Out, opts.x_min),
    });

    let betweenness = if runs(Stage::Betweenness) {
        let bc = centrality::betweenness(g, true, true)?;
        Some(centrality::top_k(g, &bc, opts.top_k))
    } else {
        None
    };
    let (pagerank, pagerank_run) = if runs(Stage::Pagerank) {
        let pr = centrality::pagerank(g, opts.pagerank)?;
        let run = PageRankRun {
            iterations: pr.iterations,
            converged: pr.converged,
            last_delta: pr.last_delta,
        };
        (
            Some(centrality::top_k(g, &pr.vector, opts.top_k)),
            Some(run),
        )
    } else {
        (None, None)
    };
    let degree = centrality::top_k(g, &centrality::degree_centrality(g), opts.top_k);

    let summary = NetworkSummary {
        vertex_count: n,
        edge_count: g.edge_count(),
        method_vertexes,
        class_vertexes: n - method_vertexes,
        avg_degree: g.edge_count() as f64 / n as f64,
        avg_degree_undirected: projection.edge_count() as f64 / n as f64,
        avg_clustering: metrics::avg_clustering_undirected(&projection)?,
        avg_shortest_path: paths.as_ref().map(|p| p.directed.avg_shortest_path),
        diameter: paths.as_ref().map(|p| p.directed.diameter),
        avg_shortest_path_undirected: paths.as_ref().map(|p| p.undirected.avg_shortest_path),
        diameter_undirected: paths.as_ref().map(|p| p.undirected.diameter),
        modularity: partition.as_ref().map(|p| p.modularity),
        community_count: partition.as_ref().map(|p| p.count),
        component_count: comps.count(),
        giant_component_fraction: comps.giant_fraction,
    };

    let skipped: Vec<String> = opts.skip.iter().map(|s| s.as_str().to_string()).collect();
    let (path_sampling, sampled_sources, path_sample_seed) = match opts.sampling {
        PathSampling::Auto => ("auto", None, None),
        PathSampling::Exact => ("exact", None, None),
        PathSampling::Sampled { sources, seed } => ("sampled", Some(sources), Some(seed)),
    };
    let provenance = Provenance {
        tool: TOOL_NAME.into(),
        version: TOOL_VERSION.into(),
        input: opts.input.clone(),
        seed: opts.seed,
        louvain_seed: opts.seed,
        small_world_seed: opts.seed,
        replicates: opts.replicates.max(1),
        top_k: opts.top_k,
        path_sampling: path_sampling.into(),
        sampled_sources,
        path_sample_seed,
        x_min: opts.x_min.max(1),
        resolution: opts.resolution,
        pagerank_damping: opts.pagerank.damping,
        pagerank_tol: opts.pagerank.tol,
        pagerank_max_iter: opts.pagerank.max_iter,
        skipped_stages: skipped.clone(),
        generated_at: opts.timestamp.clone(),
    };

    let report = AnalysisReport {
        provenance,
        summary,
        paths,
        communities,
        small_world,
        power_law,
        pagerank_run,
        top: TopLists {
            betweenness,
            degree,
            pagerank,
        },
        incomplete: skipped,
    };
    Ok(Analysis { report, partition })
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn fmt_f(v: f64) -> String {
    format!("{v:.6}")
}

/// Aligned two-column text table of the summary, followed by the top-k
/// rankings.
pub fn render_table(r: &AnalysisReport) -> String {
    let s = &r.summary;
    let mut rows: Vec<(&str, String)> = vec![
        ("Vertexes", s.vertex_count.to_string()),
        ("Edges", s.edge_count.to_string()),
        ("Average degree", fmt_f(s.avg_degree)),
        (
            "Average degree (undirected)",
            fmt_f(s.avg_degree_undirected),
        ),
        ("Average clustering coefficient", fmt_f(s.avg_clustering)),
        (
            "Average shortest path",
            opt(&s.avg_shortest_path.map(fmt_f)),
        ),
        ("Network diameter", opt(&s.diameter)),
        (
            "Average shortest path (undirected)",
            opt(&s.avg_shortest_path_undirected.map(fmt_f)),
        ),
        ("Network diameter (undirected)", opt(&s.diameter_undirected)),
        ("Modularity", opt(&s.modularity.map(fmt_f))),
        ("Communities", opt(&s.community_count)),
        ("Connected components", s.component_count.to_string()),
        (
            "Giant component fraction",
            fmt_f(s.giant_component_fraction),
        ),
    ];
    if let Some(sw) = &r.small_world {
        rows.push(("Link probability p", format!("{:.6e}", sw.p)));
        rows.push(("Random clustering (mean)", fmt_f(sw.c_random_mean)));
        rows.push(("Random shortest path (mean)", fmt_f(sw.d_random_mean)));
        rows.push(("Small-world", sw.verdict.to_string()));
    }
    if let Some(pl) = &r.power_law {
        rows.push((
            "Power-law alpha (regression)",
            opt(&pl.total.regression.as_ref().map(|f| fmt_f(f.alpha))),
        ));
        rows.push((
            "Power-law alpha (MLE)",
            opt(&pl.total.mle.as_ref().map(|f| fmt_f(f.alpha))),
        ));
    }
    if !r.incomplete.is_empty() {
        rows.push(("Incomplete (skipped)", r.incomplete.join(", ")));
    }
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in &rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    let lists = [
        ("Betweenness", r.top.betweenness.as_ref()),
        ("Degree", Some(&r.top.degree)),
        ("PageRank", r.top.pagerank.as_ref()),
    ];
    for (name, list) in lists {
        let Some(list) = list else { continue };
        let _ = writeln!(out, "\nTop {} by {name}", list.len());
        for (i, rv) in list.iter().enumerate() {
            let _ = writeln!(out, "{:>3}  {:<.6}  {}", i + 1, rv.score, rv.label);
        }
    }
    out
}

/// One row per rank with label and score for each measure; exactly
/// `min(k, n)` data rows.
pub fn render_top_csv(r: &AnalysisReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([
        "rank",
        "betweenness",
        "betweenness_score",
        "degree",
        "degree_score",
        "pagerank",
        "pagerank_score",
    ])
    .expect("in-memory write");
    let empty = Vec::new();
    let cols = [
        r.top.betweenness.as_ref().unwrap_or(&empty),
        &r.top.degree,
        r.top.pagerank.as_ref().unwrap_or(&empty),
    ];
    let rows = cols.iter().map(|c| c.len()).max().unwrap_or(0);
    for i in 0..rows {
        let mut rec = vec![(i + 1).to_string()];
        for c in cols {
            match c.get(i) {
                Some(rv) => {
                    rec.push(rv.label.clone());
                    rec.push(rv.score.to_string());
                }
                None => rec.extend([String::new(), String::new()]),
            }
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 labels")
}
