//! Basal network measures: degrees, clustering, shortest paths, components.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DirectedGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("graph has no vertexes")]
    EmptyGraph,
}

/// Graphs larger than this use sampled path statistics under
/// [`PathSampling::Auto`].
pub const EXACT_PATHS_MAX_VERTEXES: usize = 50_000;
pub const DEFAULT_SAMPLED_SOURCES: usize = 1_000;
pub const DEFAULT_SAMPLE_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeReport {
    pub in_degree: Vec<usize>,
    pub out_degree: Vec<usize>,
    /// in + out; a self-loop counts twice.
    pub total_degree: Vec<usize>,
    pub avg_in: f64,
    pub avg_out: f64,
    pub avg_total: f64,
}

pub fn degrees(g: &DirectedGraph) -> DegreeReport {
    let in_degree: Vec<usize> = g.vertices().map(|v| g.in_degree(v)).collect();
    let out_degree: Vec<usize> = g.vertices().map(|v| g.out_degree(v)).collect();
    let total_degree: Vec<usize> = in_degree
        .iter()
        .zip(&out_degree)
        .map(|(a, b)| a + b)
        .collect();
    let n = g.vertex_count().max(1) as f64;
    let mean = |d: &[usize]| d.iter().sum::<usize>() as f64 / n;
    DegreeReport {
        avg_in: mean(&in_degree),
        avg_out: mean(&out_degree),
        avg_total: mean(&total_degree),
        in_degree,
        out_degree,
        total_degree,
    }
}

/// Simple undirected graph: sorted, duplicate-free adjacency, no self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UndirectedGraph {
    adj: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl UndirectedGraph {
    /// Builds from an edge list; duplicates and self-loops are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                adj[u as usize].push(v);
                adj[v as usize].push(u);
            }
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        UndirectedGraph {
            adj,
            edge_count: edge_count / 2,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn adjacency(&self) -> &[Vec<VertexId>] {
        &self.adj
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as VertexId;
            list.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }
}

/// `{u,v}` is an edge iff `u→v` or `v→u`; self-loops are dropped.
pub fn undirected_projection(g: &DirectedGraph) -> UndirectedGraph {
    UndirectedGraph::from_edges(g.vertex_count(), g.edges())
}

fn local_clustering(g: &UndirectedGraph, v: VertexId, mark: &mut [bool]) -> f64 {
    let nbrs = g.neighbors(v);
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    for &u in nbrs {
        mark[u as usize] = true;
    }
    let mut links = 0usize;
    for &u in nbrs {
        links += g.neighbors(u).iter().filter(|&&w| mark[w as usize]).count();
    }
    for &u in nbrs {
        mark[u as usize] = false;
    }
    // each neighbor link is seen from both ends
    links as f64 / (k * (k - 1)) as f64
}

/// Per-vertex local clustering coefficients; degree < 2 gives 0.
pub fn local_clustering_coefficients(g: &UndirectedGraph) -> Vec<f64> {
    let n = g.vertex_count();
    (0..n as VertexId)
        .into_par_iter()
        .map_init(|| vec![false; n], |mark, v| local_clustering(g, v, mark))
        .collect()
}

pub fn avg_clustering_undirected(g: &UndirectedGraph) -> Result<f64, MetricsError> {
    if g.vertex_count() == 0 {
        return Err(MetricsError::EmptyGraph);
    }
    // sequential sum keeps the result independent of the thread count
    let sum: f64 = local_clustering_coefficients(g).iter().sum();
    Ok(sum / g.vertex_count() as f64)
}

/// Mean local clustering coefficient over all vertexes of the undirected
/// projection.
pub fn avg_clustering(g: &DirectedGraph) -> Result<f64, MetricsError> {
    avg_clustering_undirected(&undirected_projection(g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathMode {
    Directed,
    Undirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathSampling {
    /// Exact up to [`EXACT_PATHS_MAX_VERTEXES`], sampled beyond.
    #[default]
    Auto,
    Exact,
    Sampled {
        sources: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    pub mode: PathMode,
    /// Mean over ordered pairs `(u, v)`, `u != v`, with finite distance.
    pub avg_shortest_path: f64,
    /// Largest finite distance (a lower bound when sampled).
    pub diameter: u32,
    pub reachable_pairs: u64,
    pub sources: usize,
    pub sampled: bool,
    pub sample_seed: Option<u64>,
}

#[derive(Default, Clone, Copy)]
struct BfsTotals {
    sum: u64,
    pairs: u64,
    max: u32,
}

impl BfsTotals {
    fn merge(self, o: BfsTotals) -> BfsTotals {
        BfsTotals {
            sum: self.sum + o.sum,
            pairs: self.pairs + o.pairs,
            max: self.max.max(o.max),
        }
    }
}

fn bfs_totals(
    adj: &[Vec<VertexId>],
    source: VertexId,
    dist: &mut [u32],
    queue: &mut Vec<VertexId>,
) -> BfsTotals {
    const UNSEEN: u32 = u32::MAX;
    let mut t = BfsTotals::default();
    queue.clear();
    dist[source as usize] = 0;
    queue.push(source);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let d = dist[v as usize];
        for &w in &adj[v as usize] {
            if dist[w as usize] == UNSEEN {
                dist[w as usize] = d + 1;
                t.sum += (d + 1) as u64;
                t.pairs += 1;
                t.max = t.max.max(d + 1);
                queue.push(w);
            }
        }
    }
    for &v in queue.iter() {
        dist[v as usize] = UNSEEN;
    }
    t
}

/// Hop distances from `source`; `None` when unreachable.
pub fn bfs_distances(adj: &[Vec<VertexId>], source: VertexId) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    let mut queue = std::collections::VecDeque::from([source]);
    dist[source as usize] = Some(0);
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize].unwrap_or(0);
        for &w in &adj[v as usize] {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn choose_sources(n: usize, sampling: PathSampling) -> (Vec<VertexId>, bool, Option<u64>) {
    let sampled = match sampling {
        PathSampling::Exact => None,
        PathSampling::Auto if n <= EXACT_PATHS_MAX_VERTEXES => None,
        PathSampling::Auto => Some((DEFAULT_SAMPLED_SOURCES, DEFAULT_SAMPLE_SEED)),
        PathSampling::Sampled { sources, seed } => Some((sources, seed)),
    };
    match sampled {
        Some((k, seed)) if k < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<VertexId> = rand::seq::index::sample(&mut rng, n, k)
                .into_iter()
                .map(|i| i as VertexId)
                .collect();
            picked.sort_unstable();
            (picked, true, Some(seed))
        }
        _ => ((0..n as VertexId).collect(), false, None),
    }
}

/// BFS path statistics over an adjacency list.
pub fn path_stats_on(adj: &[Vec<VertexId>], mode: PathMode, sampling: PathSampling) -> PathStats {
    let n = adj.len();
    let (sources, sampled, sample_seed) = choose_sources(n, sampling);
    let totals = sources
        .par_iter()
        .map_init(
            || (vec![u32::MAX; n], Vec::with_capacity(n)),
            |(dist, queue), &s| bfs_totals(adj, s, dist, queue),
        )
        .reduce(BfsTotals::default, BfsTotals::merge);
    PathStats {
        mode,
        avg_shortest_path: if totals.pairs == 0 {
            0.0
        } else {
            totals.sum as f64 / totals.pairs as f64
        },
        diameter: totals.max,
        reachable_pairs: totals.pairs,
        sources: sources.len(),
        sampled,
        sample_seed,
    }
}

pub fn shortest_path_stats(
    g: &DirectedGraph,
    mode: PathMode,
    sampling: PathSampling,
) -> Result<PathStats, MetricsError> {
    if g.is_empty() {
        return Err(MetricsError::EmptyGraph);
    }
    Ok(match mode {
        PathMode::Directed => {
            let adj: Vec<Vec<VertexId>> =
                g.vertices().map(|v| g.out_neighbors(v).to_vec()).collect();
            path_stats_on(&adj, mode, sampling)
        }
        PathMode::Undirected => path_stats_on(undirected_projection(g).adjacency(), mode, sampling),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Components {
    /// Component label per vertex, numbered in order of lowest vertex id.
    pub label: Vec<u32>,
    pub sizes: Vec<usize>,
    /// Label of the largest component (lowest label on ties).
    pub giant: u32,
    pub giant_fraction: f64,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn in_giant(&self, v: VertexId) -> bool {
        self.label[v as usize] == self.giant
    }
}

pub fn connected_components(g: &UndirectedGraph) -> Components {
    let n = g.vertex_count();
    let mut label = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != u32::MAX {
            continue;
        }
        let c = sizes.len() as u32;
        label[start] = c;
        stack.push(start as VertexId);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in g.neighbors(v) {
                if label[w as usize] == u32::MAX {
                    label[w as usize] = c;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    let giant = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i as u32)
        .unwrap_or(0);
    let giant_fraction = if n == 0 {
        0.0
    } else {
        sizes[giant as usize] as f64 / n as f64
    };
    Components {
        label,
        sizes,
        giant,
        giant_fraction,
    }
}

/// Weakly connected components.
pub fn components(g: &DirectedGraph) -> Components {
    connected_components(&undirected_projection(g))
}

/// Subgraph induced by the largest weakly connected component.
pub fn giant_component(g: &DirectedGraph) -> DirectedGraph {
    let c = components(g);
    g.induced_subgraph(|v| c.in_giant(v))
}

/// Restricts an undirected graph to one component, renumbering vertexes.
pub fn component_subgraph(g: &UndirectedGraph, c: &Components, which: u32) -> UndirectedGraph {
    let mut map = vec![u32::MAX; g.vertex_count()];
    let mut next = 0;
    for v in 0..g.vertex_count() {
        if c.label[v] == which {
            map[v] = next;
            next += 1;
        }
    }
    let edges = g
        .edges()
        .filter(|&(u, _)| map[u as usize] != u32::MAX)
        .map(|(u, v)| (map[u as usize], map[v as usize]));
    UndirectedGraph::from_edges(next as usize, edges)
}
