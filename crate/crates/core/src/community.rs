//! Modularity and Louvain community detection on the undirected projection.

use std::collections::HashMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DirectedGraph;
use crate::metrics::{undirected_projection, UndirectedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommunityError {
    #[error("graph has no vertexes")]
    EmptyGraph,
    #[error("partition covers {partition} vertexes, graph has {graph}")]
    PartitionMismatch { partition: usize, graph: usize },
}

/// Minimum modularity gain for a move to count.
pub const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Community id per vertex, contiguous from 0 in order of first vertex.
    pub assignment: Vec<u32>,
    pub count: usize,
    pub modularity: f64,
}

/// Renumbers ids contiguously in order of first appearance.
pub fn canonical_assignment(raw: &[u32]) -> (Vec<u32>, usize) {
    let mut map: HashMap<u32, u32> = HashMap::new();
    let out = raw
        .iter()
        .map(|c| {
            let next = map.len() as u32;
            *map.entry(*c).or_insert(next)
        })
        .collect();
    (out, map.len())
}

/// Newman modularity `Σ_c (e_c/m − (d_c/2m)²)`. Returns 0 when the graph
/// has no edges.
pub fn modularity_undirected(
    g: &UndirectedGraph,
    assignment: &[u32],
    resolution: f64,
) -> Result<f64, CommunityError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(CommunityError::EmptyGraph);
    }
    if assignment.len() != n {
        return Err(CommunityError::PartitionMismatch {
            partition: assignment.len(),
            graph: n,
        });
    }
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return Ok(0.0);
    }
    let k = assignment.iter().copied().max().unwrap_or(0) as usize + 1;
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for v in 0..n {
        degree[assignment[v] as usize] += g.degree(v as u32) as f64;
    }
    for (u, v) in g.edges() {
        if assignment[u as usize] == assignment[v as usize] {
            internal[assignment[u as usize] as usize] += 1.0;
        }
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(e, d)| e / m - resolution * (d / (2.0 * m)).powi(2))
        .sum())
}

pub fn modularity(g: &DirectedGraph, assignment: &[u32]) -> Result<f64, CommunityError> {
    modularity_undirected(&undirected_projection(g), assignment, 1.0)
}

/// Weighted graph used between Louvain levels. Self-loop weight is kept
/// apart from the neighbor lists.
struct LevelGraph {
    adj: Vec<Vec<(u32, f64)>>,
    loops: Vec<f64>,
    /// Weighted degree, self-loops counted twice.
    degree: Vec<f64>,
    /// Total edge weight `m`.
    total: f64,
}

impl LevelGraph {
    fn from_simple(g: &UndirectedGraph) -> Self {
        let adj: Vec<Vec<(u32, f64)>> = g
            .adjacency()
            .iter()
            .map(|list| list.iter().map(|&v| (v, 1.0)).collect())
            .collect();
        let degree = adj.iter().map(|l| l.len() as f64).collect();
        LevelGraph {
            loops: vec![0.0; adj.len()],
            adj,
            degree,
            total: g.edge_count() as f64,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapses communities into single vertexes.
    fn aggregate(&self, community: &[u32], count: usize) -> LevelGraph {
        let mut loops = vec![0.0; count];
        let mut maps: Vec<HashMap<u32, f64>> = vec![HashMap::new(); count];
        let mut order: Vec<Vec<u32>> = vec![Vec::new(); count];
        for u in 0..self.len() {
            let cu = community[u];
            loops[cu as usize] += self.loops[u];
            for &(v, w) in &self.adj[u] {
                let cv = community[v as usize];
                if cu == cv {
                    // each internal edge is visited from both ends
                    loops[cu as usize] += w / 2.0;
                } else {
                    let entry = maps[cu as usize].entry(cv).or_insert_with(|| {
                        order[cu as usize].push(cv);
                        0.0
                    });
                    *entry += w;
                }
            }
        }
        let adj: Vec<Vec<(u32, f64)>> = order
            .iter()
            .zip(&maps)
            .map(|(keys, weights)| keys.iter().map(|k| (*k, weights[k])).collect())
            .collect();
        let degree = adj
            .iter()
            .zip(&loops)
            .map(|(l, s)| l.iter().map(|(_, w)| w).sum::<f64>() + 2.0 * s)
            .collect();
        LevelGraph {
            adj,
            loops,
            degree,
            total: self.total,
        }
    }
}

/// One local-moving phase starting from `community`. Returns whether
/// anything moved.
fn local_moving(
    g: &LevelGraph,
    community: &mut [u32],
    resolution: f64,
    rng: &mut ChaCha8Rng,
) -> bool {
    let n = g.len();
    let two_m = 2.0 * g.total;
    let mut tot: Vec<f64> = vec![0.0; n];
    for (v, &c) in community.iter().enumerate() {
        tot[c as usize] += g.degree[v];
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);

    let mut weight_to: Vec<f64> = vec![0.0; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut moved_any = false;
    loop {
        let mut moved = false;
        for &v in &order {
            let vi = v as usize;
            let k_v = g.degree[vi];
            let current = community[vi];
            for &(u, w) in &g.adj[vi] {
                let c = community[u as usize];
                if weight_to[c as usize] == 0.0 {
                    touched.push(c);
                }
                weight_to[c as usize] += w;
            }
            tot[current as usize] -= k_v;
            let gain = |c: u32, w_in: f64| w_in - resolution * tot[c as usize] * k_v / two_m;
            let mut best = current;
            let mut best_gain = gain(current, weight_to[current as usize]);
            for &c in &touched {
                let g_c = gain(c, weight_to[c as usize]);
                if g_c > best_gain + MIN_GAIN {
                    best = c;
                    best_gain = g_c;
                }
            }
            tot[best as usize] += k_v;
            if best != current {
                community[vi] = best;
                moved = true;
                moved_any = true;
            }
            for &c in &touched {
                weight_to[c as usize] = 0.0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
    }
    moved_any
}

/// Repeats local moving and aggregation on `level` until no vertex moves,
/// folding each level's moves into `membership`.
fn run_levels(
    mut level: LevelGraph,
    membership: &mut [u32],
    resolution: f64,
    rng: &mut ChaCha8Rng,
) {
    loop {
        let mut community: Vec<u32> = (0..level.len() as u32).collect();
        if !local_moving(&level, &mut community, resolution, rng) {
            break;
        }
        let (community, count) = canonical_assignment(&community);
        for c in membership.iter_mut() {
            *c = community[*c as usize];
        }
        level = level.aggregate(&community, count);
    }
}

/// Two-phase Louvain: local moving, then aggregation, repeated until no
/// vertex moves. The result is then refined by single-vertex moves on the
/// original graph; when that changes anything, aggregation resumes from the
/// refined partition. The sweep order of each pass is a permutation drawn
/// from `seed`.
pub fn louvain_undirected(
    g: &UndirectedGraph,
    resolution: f64,
    seed: u64,
) -> Result<Partition, CommunityError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(CommunityError::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut membership: Vec<u32> = (0..n as u32).collect();
    if g.edge_count() > 0 {
        let base = LevelGraph::from_simple(g);
        run_levels(
            LevelGraph::from_simple(g),
            &mut membership,
            resolution,
            &mut rng,
        );
        while local_moving(&base, &mut membership, resolution, &mut rng) {
            let (refined, count) = canonical_assignment(&membership);
            membership = refined;
            let coarse = base.aggregate(&membership, count);
            let mut coarse_membership: Vec<u32> = (0..count as u32).collect();
            run_levels(coarse, &mut coarse_membership, resolution, &mut rng);
            for c in membership.iter_mut() {
                *c = coarse_membership[*c as usize];
            }
        }
    }
    let (assignment, count) = canonical_assignment(&membership);
    let modularity = modularity_undirected(g, &assignment, resolution)?;
    Ok(Partition {
        assignment,
        count,
        modularity,
    })
}

pub fn louvain(g: &DirectedGraph, resolution: f64, seed: u64) -> Result<Partition, CommunityError> {
    louvain_undirected(&undirected_projection(g), resolution, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeDistribution {
    /// Community sizes, largest first.
    pub sizes: Vec<usize>,
    pub mean_size: f64,
    pub top_k: usize,
    /// Fraction of vertexes held by the `top_k` largest communities.
    pub top_k_share: f64,
}

pub fn community_size_distribution(p: &Partition, top_k: usize) -> SizeDistribution {
    let mut sizes = vec![0usize; p.count];
    for &c in &p.assignment {
        sizes[c as usize] += 1;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let n = p.assignment.len();
    let top: usize = sizes.iter().take(top_k).sum();
    SizeDistribution {
        mean_size: if p.count == 0 {
            0.0
        } else {
            n as f64 / p.count as f64
        },
        top_k_share: if n == 0 { 0.0 } else { top as f64 / n as f64 },
        top_k,
        sizes,
    }
}

/// Two-column CSV `vertex,community`.
pub fn write_partition_csv<W: Write>(g: &DirectedGraph, p: &Partition, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["vertex", "community"])?;
    for v in g.vertices() {
        w.write_record([g.label(v), &p.assignment[v as usize].to_string()])?;
    }
    w.flush()?;
    Ok(())
}
