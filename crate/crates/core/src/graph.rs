//! Task graphs: directed acyclic graphs with a source `s`, a target `t` and
//! nonnegative rational edge costs.
//!
//! Raw data lives in [`GraphParts`], which may describe a broken graph and can
//! be checked with [`GraphParts::validate`]. A [`TaskGraph`] is only built from
//! parts without structural defects (dangling endpoints, parallel edges,
//! negative costs, cycles) and caches a topological order.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::fmt;

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub cost: Rational,
}

/// One failed graph invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    SourceOutOfRange { source: NodeId },
    TargetOutOfRange { target: NodeId },
    SourceIsTarget,
    DanglingEdge { edge: EdgeId, node: NodeId },
    ParallelEdge { first: EdgeId, second: EdgeId },
    NegativeCost { edge: EdgeId, cost: String },
    Cycle { nodes: Vec<NodeId> },
    TargetUnreachable,
}

impl Violation {
    /// Structural violations prevent building a [`TaskGraph`] at all.
    pub fn is_structural(&self) -> bool {
        !matches!(self, Violation::TargetUnreachable)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SourceOutOfRange { source } => write!(f, "source {source} is not a node"),
            Violation::TargetOutOfRange { target } => write!(f, "target {target} is not a node"),
            Violation::SourceIsTarget => write!(f, "source and target coincide"),
            Violation::DanglingEdge { edge, node } => {
                write!(f, "edge {edge} references missing node {node}")
            }
            Violation::ParallelEdge { first, second } => {
                write!(f, "edges {first} and {second} join the same ordered pair")
            }
            Violation::NegativeCost { edge, cost } => {
                write!(f, "edge {edge} has negative cost {cost}")
            }
            Violation::Cycle { nodes } => {
                let names: Vec<String> = nodes.iter().map(|v| v.to_string()).collect();
                write!(f, "cycle through {}", names.join(" -> "))
            }
            Violation::TargetUnreachable => write!(f, "target is unreachable from source"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid task graph: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("target is unreachable from source")]
    NoPath,
    #[error("no edge from {from} to {to}")]
    UnknownEdge { from: NodeId, to: NodeId },
    #[error("the target has no outgoing decision")]
    TargetHasNoChoice,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Unchecked graph data, as read from a file or assembled by hand.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphParts {
    pub labels: Vec<Option<String>>,
    pub edges: Vec<Edge>,
    pub source: NodeId,
    pub target: NodeId,
}

impl GraphParts {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Every violated invariant, in a stable order. An empty list means the
    /// parts form a valid task graph.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.node_count();
        let mut out = Vec::new();
        let endpoints_ok = self.source.0 < n && self.target.0 < n;
        if self.source.0 >= n {
            out.push(Violation::SourceOutOfRange {
                source: self.source,
            });
        }
        if self.target.0 >= n {
            out.push(Violation::TargetOutOfRange {
                target: self.target,
            });
        }
        if endpoints_ok && self.source == self.target {
            out.push(Violation::SourceIsTarget);
        }

        let mut dangling = false;
        let mut seen: HashMap<(NodeId, NodeId), EdgeId> = HashMap::new();
        for (i, edge) in self.edges.iter().enumerate() {
            let id = EdgeId(i);
            for node in [edge.from, edge.to] {
                if node.0 >= n {
                    dangling = true;
                    out.push(Violation::DanglingEdge { edge: id, node });
                }
            }
            if let Some(&first) = seen.get(&(edge.from, edge.to)) {
                out.push(Violation::ParallelEdge { first, second: id });
            } else {
                seen.insert((edge.from, edge.to), id);
            }
            if edge.cost.is_negative() {
                out.push(Violation::NegativeCost {
                    edge: id,
                    cost: edge.cost.to_string(),
                });
            }
        }
        if dangling {
            return out;
        }

        let adjacency = adjacency(n, &self.edges);
        let cycle = match topological_order(n, &self.edges, &adjacency) {
            Ok(_) => false,
            Err(nodes) => {
                out.push(Violation::Cycle { nodes });
                true
            }
        };
        if endpoints_ok && !cycle && self.source != self.target {
            let reach = forward_reach(n, &adjacency, &self.edges, self.source);
            if !reach[self.target.0] {
                out.push(Violation::TargetUnreachable);
            }
        }
        out
    }
}

/// Incremental construction of a [`TaskGraph`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    parts: GraphParts,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, label: impl Into<String>) -> NodeId {
        self.parts.labels.push(Some(label.into()));
        NodeId(self.parts.labels.len() - 1)
    }

    pub fn add_unlabeled_node(&mut self) -> NodeId {
        self.parts.labels.push(None);
        NodeId(self.parts.labels.len() - 1)
    }

    pub fn add_edge(&mut self, from: NodeId, to: NodeId, cost: Rational) -> EdgeId {
        self.parts.edges.push(Edge { from, to, cost });
        EdgeId(self.parts.edges.len() - 1)
    }

    pub fn build(mut self, source: NodeId, target: NodeId) -> Result<TaskGraph, GraphError> {
        self.parts.source = source;
        self.parts.target = target;
        TaskGraph::from_parts(self.parts)
    }
}

/// A structurally sound task graph. Node ids are dense indices `0..n`.
#[derive(Debug, Clone)]
pub struct TaskGraph {
    labels: Vec<Option<String>>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
    topo: Vec<NodeId>,
    topo_pos: Vec<usize>,
    source: NodeId,
    target: NodeId,
}

/// Structural equality: same labels, edges (in order), source and target.
impl PartialEq for TaskGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.edges == other.edges
            && self.source == other.source
            && self.target == other.target
    }
}

impl Eq for TaskGraph {}

/// Result of [`TaskGraph::preprocess_mapped`]: the cleaned graph plus the
/// original id of every surviving node and edge.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub graph: TaskGraph,
    pub node_origin: Vec<NodeId>,
    pub edge_origin: Vec<EdgeId>,
}

impl TaskGraph {
    /// Builds a graph, rejecting every structural violation. A graph whose
    /// target is unreachable is still accepted; [`TaskGraph::preprocess`]
    /// reports that case as [`GraphError::NoPath`].
    pub fn from_parts(parts: GraphParts) -> Result<Self, GraphError> {
        let structural: Vec<Violation> = parts
            .validate()
            .into_iter()
            .filter(Violation::is_structural)
            .collect();
        if !structural.is_empty() {
            return Err(GraphError::Invalid(structural));
        }
        let n = parts.node_count();
        let out = adjacency(n, &parts.edges);
        let mut inc = vec![Vec::new(); n];
        for (i, e) in parts.edges.iter().enumerate() {
            inc[e.to.0].push(EdgeId(i));
        }
        let topo = topological_order(n, &parts.edges, &out).expect("acyclic after validation");
        let mut topo_pos = vec![0; n];
        for (i, v) in topo.iter().enumerate() {
            topo_pos[v.0] = i;
        }
        Ok(TaskGraph {
            labels: parts.labels,
            edges: parts.edges,
            out,
            inc,
            topo,
            topo_pos,
            source: parts.source,
            target: parts.target,
        })
    }

    pub fn to_parts(&self) -> GraphParts {
        GraphParts {
            labels: self.labels.clone(),
            edges: self.edges.clone(),
            source: self.source,
            target: self.target,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_count()).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out[v.0]
    }

    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.inc[v.0]
    }

    pub fn find_edge(&self, from: NodeId, to: NodeId) -> Option<EdgeId> {
        self.out
            .get(from.0)?
            .iter()
            .copied()
            .find(|&e| self.edges[e.0].to == to)
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.labels[v.0].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    /// Label if present, otherwise the numeric id.
    pub fn display_name(&self, v: NodeId) -> String {
        match self.label(v) {
            Some(l) => l.to_string(),
            None => v.0.to_string(),
        }
    }

    /// Looks a node up by label, falling back to a numeric id.
    pub fn resolve_node(&self, name: &str) -> Result<NodeId, GraphError> {
        let name = name.trim();
        if let Some(i) = self.labels.iter().position(|l| l.as_deref() == Some(name)) {
            return Ok(NodeId(i));
        }
        match name.parse::<usize>() {
            Ok(i) if i < self.node_count() => Ok(NodeId(i)),
            _ => Err(GraphError::UnknownNode(name.to_string())),
        }
    }

    pub fn topological_order(&self) -> &[NodeId] {
        &self.topo
    }

    /// Position of `v` in [`TaskGraph::topological_order`].
    pub fn topo_position(&self, v: NodeId) -> usize {
        self.topo_pos[v.0]
    }

    /// Remaining violations. Only [`Violation::TargetUnreachable`] can occur
    /// for a constructed graph.
    pub fn validate(&self) -> Vec<Violation> {
        if self.reachable_from_source()[self.target.0] {
            Vec::new()
        } else {
            vec![Violation::TargetUnreachable]
        }
    }

    pub fn reachable_from_source(&self) -> Vec<bool> {
        forward_reach(self.node_count(), &self.out, &self.edges, self.source)
    }

    pub fn reaches_target(&self) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[self.target.0] = true;
        let mut queue = VecDeque::from([self.target]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.inc[v.0] {
                let u = self.edges[e.0].from;
                if !seen[u.0] {
                    seen[u.0] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// True when every node lies on some `s → t` path.
    pub fn is_preprocessed(&self) -> bool {
        let fwd = self.reachable_from_source();
        let bwd = self.reaches_target();
        fwd.iter().zip(&bwd).all(|(a, b)| *a && *b)
    }

    /// Induced subgraph on the nodes lying on some `s → t` path. Surviving
    /// nodes keep their relative order and labels; ids are re-densified.
    pub fn preprocess(&self) -> Result<TaskGraph, GraphError> {
        self.preprocess_mapped().map(|p| p.graph)
    }

    pub fn preprocess_mapped(&self) -> Result<Preprocessed, GraphError> {
        let fwd = self.reachable_from_source();
        if !fwd[self.target.0] {
            return Err(GraphError::NoPath);
        }
        let bwd = self.reaches_target();
        let keep: Vec<bool> = fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect();

        let mut new_id = vec![usize::MAX; self.node_count()];
        let mut node_origin = Vec::new();
        let mut labels = Vec::new();
        for v in self.nodes() {
            if keep[v.0] {
                new_id[v.0] = node_origin.len();
                node_origin.push(v);
                labels.push(self.labels[v.0].clone());
            }
        }
        let mut edges = Vec::new();
        let mut edge_origin = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if keep[e.from.0] && keep[e.to.0] {
                edges.push(Edge {
                    from: NodeId(new_id[e.from.0]),
                    to: NodeId(new_id[e.to.0]),
                    cost: e.cost.clone(),
                });
                edge_origin.push(EdgeId(i));
            }
        }
        let graph = TaskGraph::from_parts(GraphParts {
            labels,
            edges,
            source: NodeId(new_id[self.source.0]),
            target: NodeId(new_id[self.target.0]),
        })?;
        Ok(Preprocessed {
            graph,
            node_origin,
            edge_origin,
        })
    }

    /// Same nodes, only the edges for which `keep` holds. Edge ids are
    /// re-densified in their original order.
    pub fn edge_subgraph(&self, keep: impl Fn(EdgeId) -> bool) -> (TaskGraph, Vec<EdgeId>) {
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for e in self.edge_ids() {
            if keep(e) {
                edges.push(self.edges[e.0].clone());
                origin.push(e);
            }
        }
        let graph = TaskGraph::from_parts(GraphParts {
            labels: self.labels.clone(),
            edges,
            source: self.source,
            target: self.target,
        })
        .expect("an edge subset of a valid graph is valid");
        (graph, origin)
    }

    /// Number of distinct `s → t` paths, saturating at `u128::MAX`.
    pub fn count_paths(&self) -> u128 {
        let mut count = vec![0u128; self.node_count()];
        count[self.target.0] = 1;
        for &v in self.topo.iter().rev() {
            if v == self.target {
                continue;
            }
            count[v.0] = self.out[v.0].iter().fold(0u128, |acc, e| {
                acc.saturating_add(count[self.edges[e.0].to.0])
            });
        }
        count[self.source.0]
    }

    /// Nodes reachable from `v`, including `v`.
    pub fn descendants(&self, v: NodeId) -> BTreeSet<NodeId> {
        forward_reach(self.node_count(), &self.out, &self.edges, v)
            .into_iter()
            .enumerate()
            .filter_map(|(i, r)| r.then_some(NodeId(i)))
            .collect()
    }
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<EdgeId>> {
    let mut out = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        out[e.from.0].push(EdgeId(i));
    }
    out
}

fn forward_reach(n: usize, out: &[Vec<EdgeId>], edges: &[Edge], start: NodeId) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start.0] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &e in &out[v.0] {
            let w = edges[e.0].to;
            if !seen[w.0] {
                seen[w.0] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Kahn's algorithm, smallest ready id first. On failure returns the nodes of
/// one directed cycle.
fn topological_order(
    n: usize,
    edges: &[Edge],
    out: &[Vec<EdgeId>],
) -> Result<Vec<NodeId>, Vec<NodeId>> {
    let mut indegree = vec![0usize; n];
    for e in edges {
        indegree[e.to.0] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(NodeId(v));
        for &e in &out[v] {
            let w = edges[e.0].to.0;
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    // Every leftover node has a leftover predecessor; walk backwards until a
    // node repeats.
    let mut pred = vec![None; n];
    for e in edges {
        if indegree[e.to.0] > 0 && indegree[e.from.0] > 0 {
            pred[e.to.0].get_or_insert(e.from.0);
        }
    }
    let start = (0..n).find(|&v| indegree[v] > 0).expect("leftover node");
    let mut walk = vec![start];
    let mut pos = HashMap::from([(start, 0usize)]);
    let mut cur = start;
    loop {
        let p = pred[cur].expect("leftover node has leftover predecessor");
        if let Some(&i) = pos.get(&p) {
            let mut cycle: Vec<NodeId> = walk[i..].iter().map(|&v| NodeId(v)).collect();
            cycle.reverse();
            return Err(cycle);
        }
        pos.insert(p, walk.len());
        walk.push(p);
        cur = p;
    }
}
