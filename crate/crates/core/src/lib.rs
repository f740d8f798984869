//! Static call graph extraction from JVM class archives and complex-network
//! analysis of the resulting method/class graph.
//!
//! The pipeline is staged: [`extract`] turns an archive into a relation
//! table, [`graph`] builds the directed method/class graph from it, and the
//! analysis modules ([`metrics`], [`centrality`], [`community`],
//! [`topology`]) feed the [`report`].

pub mod centrality;
pub mod classfile;
pub mod community;
pub mod extract;
pub mod graph;
pub mod metrics;
pub mod report;
pub mod topology;
