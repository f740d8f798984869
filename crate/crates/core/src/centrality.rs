//! Betweenness (Brandes) and PageRank.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DirectedGraph, VertexId};
use crate::metrics::undirected_projection;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CentralityError {
    #[error("graph has no vertexes")]
    EmptyGraph,
    #[error("damping factor must lie in (0, 1), got {0}")]
    InvalidDamping(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityVector {
    pub measure: String,
    pub scores: Vec<f64>,
    pub normalized: bool,
}

/// Brandes dependency accumulation from one source.
struct BrandesWork {
    stack: Vec<VertexId>,
    preds: Vec<Vec<VertexId>>,
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    queue: std::collections::VecDeque<VertexId>,
}

impl BrandesWork {
    fn new(n: usize) -> Self {
        BrandesWork {
            stack: Vec::with_capacity(n),
            preds: vec![Vec::new(); n],
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            queue: Default::default(),
        }
    }

    fn accumulate(&mut self, adj: &[Vec<VertexId>], s: VertexId, into: &mut [f64]) {
        let s_idx = s as usize;
        self.sigma[s_idx] = 1.0;
        self.dist[s_idx] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            let dv = self.dist[v as usize];
            for &w in &adj[v as usize] {
                let wi = w as usize;
                if self.dist[wi] < 0 {
                    self.dist[wi] = dv + 1;
                    self.queue.push_back(w);
                }
                if self.dist[wi] == dv + 1 {
                    self.sigma[wi] += self.sigma[v as usize];
                    self.preds[wi].push(v);
                }
            }
        }
        while let Some(w) = self.stack.pop() {
            let wi = w as usize;
            let coeff = (1.0 + self.delta[wi]) / self.sigma[wi];
            for &v in &self.preds[wi] {
                self.delta[v as usize] += self.sigma[v as usize] * coeff;
            }
            if w != s {
                into[wi] += self.delta[wi];
            }
            // reset for the next source
            self.preds[wi].clear();
            self.sigma[wi] = 0.0;
            self.dist[wi] = -1;
            self.delta[wi] = 0.0;
        }
    }
}

/// Raw Brandes sums over every source. Sources are split into chunks whose
/// size depends only on `n`; chunk sums are added in chunk order, so the
/// result does not depend on the number of threads.
pub fn brandes_raw(adj: &[Vec<VertexId>]) -> Vec<f64> {
    let n = adj.len();
    let chunk = (n / 64).max(64);
    let sources: Vec<VertexId> = (0..n as VertexId).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(chunk)
        .map(|part| {
            let mut work = BrandesWork::new(n);
            let mut acc = vec![0.0; n];
            for &s in part {
                work.accumulate(adj, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for p in partials {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    total
}

/// Exact betweenness; endpoints excluded. Undirected scores count each
/// unordered pair once. Normalization divides by `(n-1)(n-2)` (skipped for
/// `n < 3`).
pub fn betweenness(
    g: &DirectedGraph,
    directed: bool,
    normalized: bool,
) -> Result<CentralityVector, CentralityError> {
    if g.is_empty() {
        return Err(CentralityError::EmptyGraph);
    }
    let n = g.vertex_count();
    let mut scores = if directed {
        let adj: Vec<Vec<VertexId>> = g.vertices().map(|v| g.out_neighbors(v).to_vec()).collect();
        brandes_raw(&adj)
    } else {
        let mut raw = brandes_raw(undirected_projection(g).adjacency());
        raw.iter_mut().for_each(|x| *x /= 2.0);
        raw
    };
    if normalized && n > 2 {
        let scale = if directed {
            1.0 / ((n - 1) * (n - 2)) as f64
        } else {
            2.0 / ((n - 1) * (n - 2)) as f64
        };
        scores.iter_mut().for_each(|x| *x *= scale);
    }
    Ok(CentralityVector {
        measure: if directed {
            "betweenness"
        } else {
            "betweenness_undirected"
        }
        .into(),
        scores,
        normalized,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankOptions {
    fn default() -> Self {
        PageRankOptions {
            damping: 0.85,
            tol: 1e-8,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRank {
    pub vector: CentralityVector,
    pub iterations: usize,
    /// False when `max_iter` was reached; `vector` holds the last iterate.
    pub converged: bool,
    pub last_delta: f64,
}

/// Power iteration with uniform teleport; dangling vertexes spread their
/// mass uniformly. Stops when the L1 change drops below `tol`.
pub fn pagerank(g: &DirectedGraph, options: PageRankOptions) -> Result<PageRank, CentralityError> {
    let PageRankOptions {
        damping,
        tol,
        max_iter,
    } = options;
    if !(damping > 0.0 && damping < 1.0) {
        return Err(CentralityError::InvalidDamping(damping));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Err(CentralityError::EmptyGraph);
    }
    let nf = n as f64;
    let inv_out: Vec<f64> = g
        .vertices()
        .map(|v| match g.out_degree(v) {
            0 => 0.0,
            d => 1.0 / d as f64,
        })
        .collect();
    let dangling: Vec<VertexId> = g.vertices().filter(|&v| g.out_degree(v) == 0).collect();
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut last_delta = f64::INFINITY;
    while iterations < max_iter {
        iterations += 1;
        let dangling_mass: f64 = dangling.iter().map(|&v| rank[v as usize]).sum();
        let base = (1.0 - damping) / nf + damping * dangling_mass / nf;
        next.par_iter_mut().enumerate().for_each(|(v, slot)| {
            let incoming: f64 = g
                .in_neighbors(v as VertexId)
                .iter()
                .map(|&u| rank[u as usize] * inv_out[u as usize])
                .sum();
            *slot = base + damping * incoming;
        });
        // renormalize against rounding drift
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        last_delta = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if last_delta < tol {
            break;
        }
    }
    Ok(PageRank {
        vector: CentralityVector {
            measure: "pagerank".into(),
            scores: rank,
            normalized: true,
        },
        iterations,
        converged: last_delta < tol,
        last_delta,
    })
}

/// Total degree as a centrality vector.
pub fn degree_centrality(g: &DirectedGraph) -> CentralityVector {
    CentralityVector {
        measure: "degree".into(),
        scores: g
            .vertices()
            .map(|v| (g.in_degree(v) + g.out_degree(v)) as f64)
            .collect(),
        normalized: false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedVertex {
    pub label: String,
    pub score: f64,
}

/// Highest `k` scores, ties broken by label.
pub fn top_k(g: &DirectedGraph, v: &CentralityVector, k: usize) -> Vec<RankedVertex> {
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by(|&a, &b| {
        v.scores[b as usize]
            .total_cmp(&v.scores[a as usize])
            .then_with(|| g.label(a).cmp(g.label(b)))
    });
    order
        .into_iter()
        .take(k)
        .map(|i| RankedVertex {
            label: g.label(i).to_owned(),
            score: v.scores[i as usize],
        })
        .collect()
}
