#![allow(dead_code)]

use callnet_core::graph::{DirectedGraph, GraphBuilder};
use callnet_core::metrics::UndirectedGraph;

/// Vertex `i` gets id `i` and label `v{i:03}`.
pub fn digraph(n: usize, edges: &[(usize, usize)]) -> DirectedGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_vertex(&format!("v{i:03}"));
    }
    for &(u, v) in edges {
        b.add_edge(u as u32, v as u32);
    }
    b.finish()
}

pub fn undirected(n: usize, edges: &[(usize, usize)]) -> UndirectedGraph {
    UndirectedGraph::from_edges(n, edges.iter().map(|&(u, v)| (u as u32, v as u32)))
}

pub fn clique_edges(offset: usize, k: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            e.push((offset + i, offset + j));
        }
    }
    e
}
