//! Edge-list CSV and GraphML writers for filtered graphs and spanning trees.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::Result;
use crate::filtration::{Edge, FilteredGraph};
use crate::mst::SpanningTree;
use crate::panel::format_significant;

/// Nodes and weighted links to export; endpoints index into `symbols`.
pub struct GraphView<'a> {
    pub symbols: &'a [String],
    /// Nodes written to GraphML, ascending.
    pub nodes: Vec<usize>,
    pub edges: &'a [Edge],
}

impl<'a> From<&'a FilteredGraph> for GraphView<'a> {
    fn from(fg: &'a FilteredGraph) -> Self {
        Self { symbols: fg.symbols(), nodes: fg.connected_nodes().to_vec(), edges: fg.edges() }
    }
}

impl<'a> From<&'a SpanningTree> for GraphView<'a> {
    fn from(t: &'a SpanningTree) -> Self {
        Self { symbols: &t.nodes, nodes: (0..t.nodes.len()).collect(), edges: &t.edges }
    }
}

/// `src,dst,distance`, one row per link.
pub fn write_edge_list<W: Write>(view: &GraphView<'_>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["src", "dst", "distance"])?;
    for e in view.edges {
        w.write_record([&view.symbols[e.i], &view.symbols[e.j], &format_significant(e.distance, 12)])?;
    }
    w.flush()?;
    Ok(())
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Undirected GraphML with a `distance` edge attribute and, when labels are
/// given, a `sector` node attribute. `comment` goes into an XML comment
/// right after the declaration.
pub fn write_graphml<W: Write>(
    view: &GraphView<'_>,
    labels: Option<&BTreeMap<String, String>>,
    comment: Option<&str>,
    mut out: W,
) -> Result<()> {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    if let Some(c) = comment {
        writeln!(out, "<!-- {} -->", c.replace("--", "- -"))?;
    }
    writeln!(out, r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#)?;
    if labels.is_some() {
        writeln!(out, r#"  <key id="sector" for="node" attr.name="sector" attr.type="string"/>"#)?;
    }
    writeln!(out, r#"  <key id="distance" for="edge" attr.name="distance" attr.type="double"/>"#)?;
    writeln!(out, r#"  <graph id="G" edgedefault="undirected">"#)?;
    for &v in &view.nodes {
        let id = escape(&view.symbols[v]);
        match labels.and_then(|l| l.get(&view.symbols[v])) {
            Some(label) => writeln!(out, r#"    <node id="{id}"><data key="sector">{}</data></node>"#, escape(label))?,
            None => writeln!(out, r#"    <node id="{id}"/>"#)?,
        }
    }
    for e in view.edges {
        writeln!(
            out,
            r#"    <edge source="{}" target="{}"><data key="distance">{}</data></edge>"#,
            escape(&view.symbols[e.i]),
            escape(&view.symbols[e.j]),
            format_significant(e.distance, 12)
        )?;
    }
    writeln!(out, "  </graph>")?;
    writeln!(out, "</graphml>")?;
    Ok(())
}
