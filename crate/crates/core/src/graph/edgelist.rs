//! Whitespace-separated edge lists, one `source target` pair per line.
//! Blank lines and `#` comments are ignored; labels cannot contain
//! whitespace.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{DirectedGraph, GraphBuilder, GraphError};

pub fn read_edge_list<R: BufRead>(input: R, directed: bool) -> Result<DirectedGraph, GraphError> {
    let mut b = GraphBuilder::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| GraphError::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Parse {
                line: line_no,
                reason: format!("expected 2 columns, found {}", fields.len()),
            });
        }
        b.add_labeled_edge(fields[0], fields[1]);
        if !directed {
            b.add_labeled_edge(fields[1], fields[0]);
        }
    }
    Ok(b.finish())
}

pub fn import_edge_list(path: &Path, directed: bool) -> Result<DirectedGraph, GraphError> {
    let file = File::open(path).map_err(|source| GraphError::Io {
        path: path.to_owned(),
        source,
    })?;
    read_edge_list(BufReader::new(file), directed)
}

pub fn write_edge_list<W: Write>(g: &DirectedGraph, mut out: W) -> std::io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v))?;
    }
    out.flush()
}

pub fn export_edge_list(g: &DirectedGraph, path: &Path) -> Result<(), GraphError> {
    let io_err = |source| GraphError::Io {
        path: path.to_owned(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_edge_list(g, BufWriter::new(file)).map_err(io_err)
}
