//! Graphviz export.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::config::CostConfiguration;
use crate::devices::Path;
use crate::graph::{EdgeId, TaskGraph};
use crate::rational::format_rational;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT digraph with edge labels `c` or `c (+c̃)`. Nodes and edges of
/// `highlight` are drawn bold and red.
pub fn to_dot(
    graph: &TaskGraph,
    config: Option<&CostConfiguration>,
    highlight: Option<&Path>,
) -> String {
    let on_path: BTreeSet<EdgeId> = highlight
        .map(|p| p.edges(graph).into_iter().collect())
        .unwrap_or_default();
    let mut out = String::from("digraph task_graph {\n  rankdir=LR;\n");
    for v in graph.nodes() {
        let mut attrs = vec![format!("label={}", quote(&graph.display_name(v)))];
        if v == graph.source() || v == graph.target() {
            attrs.push("shape=doublecircle".into());
        }
        if highlight.is_some_and(|p| p.contains(v)) {
            attrs.push("color=red".into());
            attrs.push("penwidth=2".into());
        }
        writeln!(out, "  n{} [{}];", v.0, attrs.join(", ")).unwrap();
    }
    for e in graph.edge_ids() {
        let edge = graph.edge(e);
        let mut label = format_rational(&edge.cost);
        if let Some(extra) = config
            .map(|c| c.get(e))
            .filter(|x| *x != num_traits::zero())
        {
            write!(label, " (+{})", format_rational(&extra)).unwrap();
        }
        let mut attrs = vec![format!("label={}", quote(&label))];
        if on_path.contains(&e) {
            attrs.push("color=red".into());
            attrs.push("penwidth=2".into());
        }
        writeln!(
            out,
            "  n{} -> n{} [{}];",
            edge.from.0,
            edge.to.0,
            attrs.join(", ")
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
