use std::fmt;

use serde::Serialize;

use super::DeviceError;
use crate::graph::{EdgeId, NodeId, TaskGraph};

/// A path `s = v_1, …, v_m = t` through a task graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Path {
    nodes: Vec<NodeId>,
}

impl Path {
    pub fn new(graph: &TaskGraph, nodes: Vec<NodeId>) -> Result<Self, DeviceError> {
        let (Some(&first), Some(&last)) = (nodes.first(), nodes.last()) else {
            return Err(DeviceError::InvalidPath("empty node sequence".into()));
        };
        if let Some(bad) = nodes.iter().find(|v| v.0 >= graph.node_count()) {
            return Err(DeviceError::InvalidPath(format!("{bad} is not a node")));
        }
        if first != graph.source() {
            return Err(DeviceError::InvalidPath(format!(
                "starts at {} instead of the source",
                graph.display_name(first)
            )));
        }
        if last != graph.target() {
            return Err(DeviceError::InvalidPath(format!(
                "ends at {} instead of the target",
                graph.display_name(last)
            )));
        }
        for pair in nodes.windows(2) {
            if graph.find_edge(pair[0], pair[1]).is_none() {
                return Err(DeviceError::InvalidPath(format!(
                    "no edge {} -> {}",
                    graph.display_name(pair[0]),
                    graph.display_name(pair[1])
                )));
            }
        }
        Ok(Path { nodes })
    }

    /// Parses comma-separated node labels (or numeric ids).
    pub fn parse(graph: &TaskGraph, text: &str) -> Result<Self, DeviceError> {
        let nodes = text
            .split(',')
            .map(|name| graph.resolve_node(name))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| DeviceError::InvalidPath(e.to_string()))?;
        Path::new(graph, nodes)
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<NodeId>) -> Self {
        Path { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Number of nodes `m`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.contains(&v)
    }

    pub fn edges(&self, graph: &TaskGraph) -> Vec<EdgeId> {
        self.nodes
            .windows(2)
            .map(|p| graph.find_edge(p[0], p[1]).expect("validated path"))
            .collect()
    }

    /// Comma-separated display names, the inverse of [`Path::parse`].
    pub fn display(&self, graph: &TaskGraph) -> String {
        self.nodes
            .iter()
            .map(|&v| graph.display_name(v))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.nodes.iter().map(|v| v.0.to_string()).collect();
        write!(f, "{}", ids.join(","))
    }
}
