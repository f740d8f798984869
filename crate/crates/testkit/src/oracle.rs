//! Slow, definition-level reference implementations used as test oracles.
//!
//! Graphs are plain edge lists over `0..n`; nothing here depends on the
//! library under test.

use rand::Rng;

pub const INF: u64 = u64::MAX;

/// Random digraph without self-loops; each ordered pair kept with
/// probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Random simple undirected graph as `u < v` pairs.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn adjacency_matrix(n: usize, edges: &[(usize, usize)], symmetric: bool) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in edges {
        a[u][v] = true;
        if symmetric {
            a[v][u] = true;
        }
    }
    a
}

/// All-pairs unweighted distances; `INF` when unreachable.
pub fn floyd_warshall(a: &[Vec<bool>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] && i != j {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != INF && d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Mean over finite ordered pairs `u != v`, and the maximum finite distance.
pub fn path_summary(d: &[Vec<u64>]) -> (f64, u64, u64) {
    let (mut sum, mut pairs, mut max) = (0u64, 0u64, 0u64);
    for (i, row) in d.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j && x != INF {
                sum += x;
                pairs += 1;
                max = max.max(x);
            }
        }
    }
    (
        if pairs == 0 {
            0.0
        } else {
            sum as f64 / pairs as f64
        },
        max,
        pairs,
    )
}

/// Number of shortest paths between every ordered pair, from the distance
/// matrix: `σ(s,t) = Σ σ(s,u)` over arcs `u→t` with `d(s,u) + 1 = d(s,t)`.
pub fn shortest_path_counts(a: &[Vec<bool>], d: &[Vec<u64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut sigma = vec![vec![0.0; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&t| d[s][t] != INF).collect();
        order.sort_by_key(|&t| d[s][t]);
        for &t in &order {
            if t == s {
                sigma[s][t] = 1.0;
                continue;
            }
            sigma[s][t] = (0..n)
                .filter(|&u| a[u][t] && d[s][u] != INF && d[s][u] + 1 == d[s][t])
                .map(|u| sigma[s][u])
                .sum();
        }
    }
    sigma
}

/// Betweenness by pair enumeration: `Σ_{s≠v≠t} σ(s,v)σ(v,t)/σ(s,t)` over
/// pairs where `v` lies on a shortest `s`–`t` path. Unnormalized, ordered
/// pairs.
pub fn brute_force_betweenness(a: &[Vec<bool>]) -> Vec<f64> {
    let n = a.len();
    let d = floyd_warshall(a);
    let sigma = shortest_path_counts(a, &d);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || d[s][t] == INF {
                continue;
            }
            for v in 0..n {
                if v == s || v == t || d[s][v] == INF || d[v][t] == INF {
                    continue;
                }
                if d[s][v] + d[v][t] == d[s][t] {
                    bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    bc
}

/// Modularity from the matrix form
/// `Q = 1/2m Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j)` on a symmetric
/// adjacency matrix without self-loops.
pub fn modularity_by_definition(a: &[Vec<bool>], community: &[usize]) -> f64 {
    let n = a.len();
    let k: Vec<f64> = a
        .iter()
        .map(|row| row.iter().filter(|&&x| x).count() as f64)
        .collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if community[i] == community[j] {
                q += a[i][j] as u8 as f64 - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Visits every set partition of `0..n` as a restricted growth string.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == n {
            f(cur);
            return;
        }
        for c in 0..=max + 1 {
            if i == 0 && c > 0 {
                break;
            }
            cur.push(c);
            rec(i + 1, n, max.max(c), cur, f);
            cur.pop();
        }
    }
    if n == 0 {
        f(&[]);
        return;
    }
    let mut cur = Vec::with_capacity(n);
    rec(0, n, 0, &mut cur, &mut f);
}

/// Best modularity over all set partitions.
pub fn exhaustive_best_modularity(a: &[Vec<bool>]) -> (f64, Vec<usize>) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for_each_partition(a.len(), |p| {
        let q = modularity_by_definition(a, p);
        if q > best.0 {
            best = (q, p.to_vec());
        }
    });
    best
}

/// Component representative per vertex by union-find; returned as the
/// smallest vertex of each component.
pub fn union_find_components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            let (lo, hi) = if ru < rv { (ru, rv) } else { (rv, ru) };
            parent[hi] = lo;
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// Local clustering by triangle counting on a symmetric matrix; vertexes of
/// degree < 2 score 0.
pub fn local_clustering(a: &[Vec<bool>]) -> Vec<f64> {
    let n = a.len();
    (0..n)
        .map(|v| {
            let nb: Vec<usize> = (0..n).filter(|&u| u != v && a[v][u]).collect();
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if a[nb[i]][nb[j]] {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

/// Two vertexes `a → b`, `b` dangling and spreading its mass uniformly:
/// solves the 2×2 stationary system directly.
pub fn pagerank_two_node(d: f64) -> (f64, f64) {
    // x_a = (1-d)/2 + d x_b / 2
    // x_b = (1-d)/2 + d x_a + d x_b / 2
    let (a11, a12, b1) = (1.0, -d / 2.0, (1.0 - d) / 2.0);
    let (a21, a22, b2) = (-d, 1.0 - d / 2.0, (1.0 - d) / 2.0);
    let det = a11 * a22 - a12 * a21;
    let xa = (b1 * a22 - a12 * b2) / det;
    let xb = (a11 * b2 - b1 * a21) / det;
    (xa, xb)
}

/// Inverse-CDF sampler for the discrete power law `P(k) ∝ k^-α`, `k ≥ x_min`,
/// truncated at `k_max` (the truncated tail mass is negligible for the
/// exponents used in tests).
pub struct PowerLawSampler {
    x_min: usize,
    cdf: Vec<f64>,
}

impl PowerLawSampler {
    pub fn new(alpha: f64, x_min: usize, k_max: usize) -> Self {
        let mut cdf = Vec::with_capacity(k_max - x_min + 1);
        let mut acc = 0.0;
        for k in x_min..=k_max {
            acc += (k as f64).powf(-alpha);
            cdf.push(acc);
        }
        let total = acc;
        cdf.iter_mut().for_each(|c| *c /= total);
        PowerLawSampler { x_min, cdf }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let i = self.cdf.partition_point(|&c| c < u);
        self.x_min + i.min(self.cdf.len() - 1)
    }
}

/// Ring lattice: each vertex linked to its `k/2` nearest neighbors on each
/// side.
pub fn ring_lattice(n: usize, k: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 0..n {
        for j in 1..=k / 2 {
            edges.push((v, (v + j) % n));
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        for (n, bell) in [(0, 1), (1, 1), (3, 5), (5, 52), (8, 4140)] {
            let mut count = 0;
            for_each_partition(n, |_| count += 1);
            assert_eq!(count, bell);
        }
    }

    #[test]
    fn two_node_pagerank_sums_to_one() {
        let (a, b) = pagerank_two_node(0.85);
        assert!((a + b - 1.0).abs() < 1e-12);
        assert!(b > a);
    }

    #[test]
    fn path_betweenness() {
        let a = adjacency_matrix(3, &[(0, 1), (1, 2)], false);
        assert_eq!(brute_force_betweenness(&a), [0.0, 1.0, 0.0]);
    }
}
