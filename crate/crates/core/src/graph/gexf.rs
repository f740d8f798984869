//! GEXF 1.2 export and import.
//!
//! Export writes a static, directed graph with a `kind` node attribute
//! (`method` or `class`). Import accepts any GEXF 1.x document with `node`
//! and `edge` elements; node labels fall back to node ids when absent.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

use super::{DirectedGraph, GraphBuilder, GraphError};

pub fn write_gexf<W: Write>(g: &DirectedGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(out, r#"<gexf xmlns="http://gexf.net/1.2" version="1.2">"#)?;
    writeln!(out, r#"  <graph mode="static" defaultedgetype="directed">"#)?;
    writeln!(out, r#"    <attributes class="node">"#)?;
    writeln!(
        out,
        r#"      <attribute id="kind" title="kind" type="string"/>"#
    )?;
    writeln!(out, r#"    </attributes>"#)?;
    writeln!(out, r#"    <nodes>"#)?;
    for v in g.vertices() {
        writeln!(
            out,
            r#"      <node id="{v}" label="{}"><attvalues><attvalue for="kind" value="{}"/></attvalues></node>"#,
            escape(g.label(v)),
            g.kind(v).as_str()
        )?;
    }
    writeln!(out, r#"    </nodes>"#)?;
    writeln!(out, r#"    <edges>"#)?;
    for (i, (u, v)) in g.edges().enumerate() {
        writeln!(out, r#"      <edge id="{i}" source="{u}" target="{v}"/>"#)?;
    }
    writeln!(out, r#"    </edges>"#)?;
    writeln!(out, r#"  </graph>"#)?;
    writeln!(out, r#"</gexf>"#)?;
    out.flush()
}

pub fn export_gexf(g: &DirectedGraph, path: &Path) -> Result<(), GraphError> {
    let io_err = |source| GraphError::Io {
        path: path.to_owned(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_gexf(g, BufWriter::new(file)).map_err(io_err)
}

fn attr(e: &BytesStart<'_>, key: &str) -> Result<Option<String>, GraphError> {
    for a in e.attributes() {
        let a = a.map_err(|err| GraphError::GexfSchema(err.to_string()))?;
        if a.key.as_ref() == key {
            let value = a
                .normalized_value(XmlVersion::Implicit1_0)
                .map_err(|err| GraphError::GexfSchema(err.to_string()))?;
            return Ok(Some(value.into_owned()));
        }
    }
    Ok(None)
}

fn required(e: &BytesStart<'_>, key: &str) -> Result<String, GraphError> {
    attr(e, key)?.ok_or_else(|| {
        GraphError::GexfSchema(format!(
            "<{}> without {} attribute",
            e.local_name().as_ref(),
            key
        ))
    })
}

pub fn read_gexf<R: BufRead>(input: R) -> Result<DirectedGraph, GraphError> {
    let mut reader = Reader::from_reader(input);
    let mut buf = Vec::new();
    let mut b = GraphBuilder::new();
    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut saw_root = false;
    let mut saw_graph = false;
    let mut pending_edges: Vec<(String, String)> = Vec::new();
    loop {
        let event = reader.read_event_into(&mut buf).map_err(|e| {
            GraphError::GexfSchema(format!("at byte {}: {e}", reader.buffer_position()))
        })?;
        match &event {
            Event::Start(e) | Event::Empty(e) => match e.local_name().as_ref() {
                "gexf" => saw_root = true,
                "graph" if saw_root => saw_graph = true,
                "node" if saw_graph => {
                    let id = required(e, "id")?;
                    let label = attr(e, "label")?.unwrap_or_else(|| id.clone());
                    if ids.contains_key(&id) {
                        return Err(GraphError::GexfSchema(format!("duplicate node id {id:?}")));
                    }
                    if b.graph.index.contains_key(&label) {
                        return Err(GraphError::GexfSchema(format!(
                            "duplicate node label {label:?}"
                        )));
                    }
                    let v = b.add_vertex(&label);
                    ids.insert(id, v);
                }
                "edge" if saw_graph => {
                    pending_edges.push((required(e, "source")?, required(e, "target")?));
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    if !saw_root {
        return Err(GraphError::GexfSchema("missing <gexf> root element".into()));
    }
    if !saw_graph {
        return Err(GraphError::GexfSchema("missing <graph> element".into()));
    }
    // Edges may precede nodes in valid documents.
    for (s, t) in pending_edges {
        let lookup = |id: &str| {
            ids.get(id).copied().ok_or_else(|| {
                GraphError::GexfSchema(format!("edge references unknown node {id:?}"))
            })
        };
        let (u, v) = (lookup(&s)?, lookup(&t)?);
        b.add_edge(u, v);
    }
    Ok(b.finish())
}

pub fn import_gexf(path: &Path) -> Result<DirectedGraph, GraphError> {
    let file = File::open(path).map_err(|source| GraphError::Io {
        path: path.to_owned(),
        source,
    })?;
    read_gexf(BufReader::new(file))
}
