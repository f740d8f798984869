//! Directed, unweighted method/class graph.
//!
//! For each call record with a callee method:
//!
//! * caller and callee in different classes:
//!   `callerMethod -> calleeClass`, `calleeClass -> calleeMethod`;
//! * same class (internal call):
//!   `callerMethod -> calleeClass`, `callerMethod -> calleeMethod`.
//!
//! Class-usage records add a single `callerClass -> calleeClass` edge.
//! Repeated calls collapse into one edge; self-loops are kept.

pub mod edgelist;
pub mod gexf;

use std::collections::{HashMap, HashSet};
use std::io;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::{NameStyle, QualifiedName, RelationTable, UnitKind};

pub type VertexId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("record {index}: {reason}")]
    MalformedRecord { index: usize, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("GEXF schema error: {0}")]
    GexfSchema(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Method,
    Class,
}

impl VertexKind {
    pub fn of_label(label: &str) -> Self {
        if label.contains("::") {
            VertexKind::Method
        } else {
            VertexKind::Class
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Method => "method",
            VertexKind::Class => "class",
        }
    }
}

/// Immutable directed graph with dense vertex ids in first-appearance order.
#[derive(Debug, Clone, Default)]
pub struct DirectedGraph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.out_adj == other.out_adj
    }
}

impl DirectedGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        VertexKind::of_label(self.label(v))
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.labels.len() as VertexId
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v as usize]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v as usize]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v as usize].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v as usize].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.out_adj[u as usize].contains(&v)
    }

    /// Edges grouped by source id, each source's targets in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, targets)| targets.iter().map(move |&v| (u as VertexId, v)))
    }

    /// Edge set as label pairs.
    pub fn label_edges(&self) -> HashSet<(&str, &str)> {
        self.edges()
            .map(|(u, v)| (self.label(u), self.label(v)))
            .collect()
    }

    /// Subgraph induced by the vertexes for which `keep` is true; ids are
    /// reassigned in the original order.
    pub fn induced_subgraph(&self, keep: impl Fn(VertexId) -> bool) -> DirectedGraph {
        let mut b = GraphBuilder::new();
        let mut map = vec![None; self.vertex_count()];
        for v in self.vertices().filter(|&v| keep(v)) {
            map[v as usize] = Some(b.add_vertex(self.label(v)));
        }
        for (u, v) in self.edges() {
            if let (Some(a), Some(c)) = (map[u as usize], map[v as usize]) {
                b.add_edge(a, c);
            }
        }
        b.finish()
    }
}

#[derive(Debug, Default)]
pub struct GraphBuilder {
    graph: DirectedGraph,
    edges: HashSet<(VertexId, VertexId)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: &str) -> VertexId {
        if let Some(&id) = self.graph.index.get(label) {
            return id;
        }
        let id = self.graph.labels.len() as VertexId;
        self.graph.labels.push(label.to_owned());
        self.graph.index.insert(label.to_owned(), id);
        self.graph.out_adj.push(Vec::new());
        self.graph.in_adj.push(Vec::new());
        id
    }

    /// Returns false when the edge already existed.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        if !self.edges.insert((u, v)) {
            return false;
        }
        self.graph.out_adj[u as usize].push(v);
        self.graph.in_adj[v as usize].push(u);
        self.graph.edge_count += 1;
        true
    }

    pub fn add_labeled_edge(&mut self, from: &str, to: &str) -> bool {
        let u = self.add_vertex(from);
        let v = self.add_vertex(to);
        self.add_edge(u, v)
    }

    pub fn finish(self) -> DirectedGraph {
        self.graph
    }
}

/// Package-boundary prefix test on a fully qualified class name. An empty
/// prefix accepts everything.
pub fn class_in_prefix(class_fqn: &str, prefix: &str) -> bool {
    let prefix = prefix.trim_end_matches('.');
    prefix.is_empty()
        || class_fqn == prefix
        || (class_fqn.starts_with(prefix) && class_fqn.as_bytes().get(prefix.len()) == Some(&b'.'))
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    pub prefix: String,
    pub style: NameStyle,
}

impl BuildOptions {
    pub fn with_prefix(prefix: &str) -> Self {
        BuildOptions {
            prefix: prefix.to_owned(),
            ..Default::default()
        }
    }
}

/// Builds the method/class graph from a relation table. Records whose
/// caller or callee class falls outside `options.prefix` are dropped
/// before any vertex is created.
pub fn build_graph(
    table: &RelationTable,
    options: &BuildOptions,
) -> Result<DirectedGraph, GraphError> {
    let mut b = GraphBuilder::new();
    let render = |n: &QualifiedName| n.render(options.style);
    for (index, r) in table.records.iter().enumerate() {
        r.validate()
            .map_err(|reason| GraphError::MalformedRecord { index, reason })?;
        let caller_class = r.caller.class_fqn();
        let callee_class = r.callee.class_fqn();
        if !class_in_prefix(&caller_class, &options.prefix)
            || !class_in_prefix(&callee_class, &options.prefix)
        {
            continue;
        }
        if r.caller_kind == UnitKind::C || r.callee_kind == UnitKind::C {
            b.add_labeled_edge(&caller_class, &callee_class);
            continue;
        }
        let caller_method = b.add_vertex(&render(&r.caller));
        let callee_class_v = b.add_vertex(&callee_class);
        let callee_method = b.add_vertex(&render(&r.callee));
        b.add_edge(caller_method, callee_class_v);
        if caller_class == callee_class {
            b.add_edge(caller_method, callee_method);
        } else {
            b.add_edge(callee_class_v, callee_method);
        }
    }
    Ok(b.finish())
}
