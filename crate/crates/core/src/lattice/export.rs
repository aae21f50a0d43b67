//! Line-oriented graph text for external visualization:
//!
//! ```text
//! # free-form comment
//! node <id> <x> <y> [left] [right] [top] [bottom]
//! edge <u> <v> <open probability>
//! ```
//!
//! Floats are written in shortest round-trip form. Bundles that still carry
//! a link bias are written with their naive open probability.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{naive_edge_probability, EdgeWeight, NetworkGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextNode {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextEdge {
    pub u: usize,
    pub v: usize,
    pub prob: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphText {
    pub nodes: Vec<TextNode>,
    pub edges: Vec<TextEdge>,
}

impl GraphText {
    pub fn from_graph(g: &NetworkGraph) -> Result<Self> {
        let nodes = g
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| TextNode {
                id,
                x: n.x,
                y: n.y,
                tags: g.tags(id).into_iter().map(String::from).collect(),
            })
            .collect();
        let edges = g
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let prob = match e.weight {
                    EdgeWeight::Open(q) => q,
                    EdgeWeight::LinkBias(p) => naive_edge_probability(p, e.multiplicity)?,
                    EdgeWeight::Unresolved => return Err(Error::UnresolvedEdge(i)),
                };
                Ok(TextEdge {
                    u: e.u,
                    v: e.v,
                    prob,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { nodes, edges })
    }
}

pub fn write_graph_text(g: &NetworkGraph) -> Result<String> {
    let text = GraphText::from_graph(g)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {:?} lattice, {} rows x {} cols, {} nodes, {} edges",
        g.kind,
        g.rows,
        g.cols,
        text.nodes.len(),
        text.edges.len()
    );
    for n in &text.nodes {
        let _ = write!(out, "node {} {} {}", n.id, n.x, n.y);
        for t in &n.tags {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
    }
    for e in &text.edges {
        let _ = writeln!(out, "edge {} {} {}", e.u, e.v, e.prob);
    }
    Ok(out)
}

pub fn read_graph_text(input: &str) -> Result<GraphText> {
    let mut graph = GraphText::default();
    for (i, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let mut fields = line.split_whitespace();
        let kind = fields.next().unwrap_or_default();
        let mut next = |what: &str| fields.next().ok_or_else(|| err(format!("missing {what}")));
        match kind {
            "node" => {
                let id = next("id")?
                    .parse()
                    .map_err(|e| err(format!("bad id: {e}")))?;
                let x = next("x")?.parse().map_err(|e| err(format!("bad x: {e}")))?;
                let y = next("y")?.parse().map_err(|e| err(format!("bad y: {e}")))?;
                let tags: Vec<String> = fields.map(String::from).collect();
                if let Some(t) = tags
                    .iter()
                    .find(|t| !matches!(t.as_str(), "left" | "right" | "top" | "bottom"))
                {
                    return Err(err(format!("unknown tag `{t}`")));
                }
                graph.nodes.push(TextNode { id, x, y, tags });
            }
            "edge" => {
                let u = next("u")?.parse().map_err(|e| err(format!("bad u: {e}")))?;
                let v = next("v")?.parse().map_err(|e| err(format!("bad v: {e}")))?;
                let prob: f64 = next("prob")?
                    .parse()
                    .map_err(|e| err(format!("bad prob: {e}")))?;
                if !(0.0..=1.0).contains(&prob) {
                    return Err(err(format!("probability {prob} outside [0, 1]")));
                }
                if fields.next().is_some() {
                    return Err(err("trailing fields".into()));
                }
                graph.edges.push(TextEdge { u, v, prob });
            }
            other => return Err(err(format!("unknown record `{other}`"))),
        }
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_honeycomb, build_square, strategy_graph, Strategy};
    use proptest::prelude::*;

    #[test]
    fn format_lines() {
        let g = build_square(2, 2)
            .unwrap()
            .with_open_probability(0.5)
            .unwrap();
        let text = write_graph_text(&g).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with('#'));
        assert_eq!(lines[1], "node 0 0 0 left bottom");
        assert_eq!(lines[4], "node 3 1 1 right top");
        assert_eq!(lines[5], "edge 0 1 0.5");
        assert_eq!(lines.len(), 1 + 4 + 4);
    }

    #[test]
    fn biased_links_export_naive_probability() {
        let g = build_honeycomb(3, 3, 2)
            .unwrap()
            .with_link_bias(0.25)
            .unwrap();
        let parsed = read_graph_text(&write_graph_text(&g).unwrap()).unwrap();
        assert!(parsed.edges.iter().all(|e| e.prob == 0.875));
        assert!(write_graph_text(&build_honeycomb(3, 3, 2).unwrap()).is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            read_graph_text("node 0 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_graph_text("# ok\nedge 0 1 1.5"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_graph_text("\nvertex 0 0 0"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_graph_text("node 0 0 0 middle"),
            Err(Error::Parse { .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip(size in 4usize..14, p in 0.0f64..=0.5) {
            let g = strategy_graph(Strategy::Transformed, size, p).unwrap();
            let text = write_graph_text(&g).unwrap();
            prop_assert_eq!(read_graph_text(&text).unwrap(), GraphText::from_graph(&g).unwrap());
        }
    }
}
