//! The present-biased agent.
//!
//! At every node `v ≠ t` the agent follows an edge minimising her perceived
//! cost and keeps going only while `ζ(v) ≤ β·r`. Ties are broken
//! arbitrarily, so a graph is motivating only if she never abandons along any
//! tie-walk. Edge choice never depends on the reward; only the abandonment
//! test does.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::config::CostConfiguration;
use crate::graph::{EdgeId, NodeId, TaskGraph};
use crate::perceived::{argmin, distances_with, expect_total};
use crate::rational::{Bias, Rational};

/// Default cap on the number of walks listed in a [`WalkReport`].
pub const DEFAULT_WALK_CAP: usize = 64;

/// `d`, `η`, `ζ` and the argmin relation for one (graph, configuration, β).
#[derive(Debug, Clone)]
pub struct AgentView<'a> {
    graph: &'a TaskGraph,
    config: &'a CostConfiguration,
    beta: Bias,
    d: Vec<Rational>,
    eta: Vec<Rational>,
    zeta: Vec<Option<Rational>>,
    argmin: Vec<Vec<EdgeId>>,
}

impl<'a> AgentView<'a> {
    /// # Panics
    ///
    /// Panics if some node cannot reach the target.
    pub fn new(graph: &'a TaskGraph, config: &'a CostConfiguration, beta: &Bias) -> Self {
        let costs = config.effective_costs(graph);
        let d = expect_total(distances_with(graph, &costs), graph);
        let eta: Vec<Rational> = graph
            .edge_ids()
            .map(|e| &costs[e.0] + beta.discount(&d[graph.edge(e).to.0]))
            .collect();
        let mut zeta = vec![None; graph.node_count()];
        let mut arg = vec![Vec::new(); graph.node_count()];
        for v in graph.nodes() {
            if v == graph.target() {
                continue;
            }
            let values: Vec<(EdgeId, Rational)> = graph
                .out_edges(v)
                .iter()
                .map(|&e| (e, eta[e.0].clone()))
                .collect();
            let (z, edges) = argmin(&values).expect("every node other than t has an out-edge");
            zeta[v.0] = Some(z);
            arg[v.0] = edges;
        }
        AgentView {
            graph,
            config,
            beta: beta.clone(),
            d,
            eta,
            zeta,
            argmin: arg,
        }
    }

    pub fn graph(&self) -> &TaskGraph {
        self.graph
    }

    pub fn config(&self) -> &CostConfiguration {
        self.config
    }

    pub fn beta(&self) -> &Bias {
        &self.beta
    }

    pub fn d(&self, v: NodeId) -> &Rational {
        &self.d[v.0]
    }

    pub fn distances(&self) -> &[Rational] {
        &self.d
    }

    pub fn eta(&self, e: EdgeId) -> &Rational {
        &self.eta[e.0]
    }

    /// `ζ(v)`; `None` only for the target.
    pub fn zeta(&self, v: NodeId) -> Option<&Rational> {
        self.zeta[v.0].as_ref()
    }

    pub fn argmin(&self, v: NodeId) -> &[EdgeId] {
        &self.argmin[v.0]
    }

    /// Successor nodes the agent may move to from `v`.
    pub fn choices(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.argmin[v.0].iter().map(|&e| self.graph.edge(e).to)
    }

    /// Smallest node set containing `s` and closed under argmin edges.
    pub fn reachable_by_ties(&self) -> BTreeSet<NodeId> {
        self.closure(|_| true)
    }

    /// Closure from `s` that does not expand nodes failing `expand`.
    fn closure(&self, expand: impl Fn(NodeId) -> bool) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::from([self.graph.source()]);
        let mut stack = vec![self.graph.source()];
        while let Some(v) = stack.pop() {
            if !expand(v) {
                continue;
            }
            for w in self.choices(v) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// True when the agent at `v` keeps going for reward `reward`.
    pub fn continues_at(&self, v: NodeId, reward: &Rational) -> bool {
        match &self.zeta[v.0] {
            None => true,
            Some(z) => z <= &self.beta.discount(reward),
        }
    }

    /// `max{ζ(v) : v reachable by ties, v ≠ t} / β`.
    pub fn min_motivating_reward(&self) -> Rational {
        let max_zeta = self
            .reachable_by_ties()
            .into_iter()
            .filter_map(|v| self.zeta[v.0].as_ref())
            .max()
            .cloned()
            .unwrap_or_else(|| Rational::from_integer(0.into()));
        self.beta.undiscount(&max_zeta)
    }

    pub fn report(&self, reward: &Rational) -> WalkReport {
        self.report_capped(reward, DEFAULT_WALK_CAP)
    }

    pub fn report_capped(&self, reward: &Rational, walk_cap: usize) -> WalkReport {
        let reachable = self.reachable_by_ties();
        let visited = self.closure(|v| self.continues_at(v, reward));
        let abandon_nodes: BTreeSet<NodeId> = visited
            .iter()
            .copied()
            .filter(|&v| !self.continues_at(v, reward))
            .collect();
        let (walks, truncated) = self.enumerate_walks(reward, walk_cap);
        WalkReport {
            motivating: abandon_nodes.is_empty(),
            reachable,
            visited,
            abandon_nodes,
            walks,
            truncated,
        }
    }

    /// Depth-first over argmin edges in edge order; each walk stops at `t` or
    /// at the node where the agent abandons.
    fn enumerate_walks(&self, reward: &Rational, cap: usize) -> (Vec<Vec<NodeId>>, bool) {
        let mut walks = Vec::new();
        let mut truncated = false;
        let mut prefix = vec![self.graph.source()];
        self.walk_dfs(&mut prefix, reward, cap, &mut walks, &mut truncated);
        (walks, truncated)
    }

    fn walk_dfs(
        &self,
        prefix: &mut Vec<NodeId>,
        reward: &Rational,
        cap: usize,
        walks: &mut Vec<Vec<NodeId>>,
        truncated: &mut bool,
    ) {
        if *truncated {
            return;
        }
        let v = *prefix.last().expect("non-empty walk");
        if v == self.graph.target() || !self.continues_at(v, reward) {
            if walks.len() == cap {
                *truncated = true;
            } else {
                walks.push(prefix.clone());
            }
            return;
        }
        for w in self.choices(v).collect::<Vec<_>>() {
            prefix.push(w);
            self.walk_dfs(prefix, reward, cap, walks, truncated);
            prefix.pop();
        }
    }
}

/// Outcome of simulating the agent for one reward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkReport {
    /// Tie closure from `s`, independent of the reward.
    pub reachable: BTreeSet<NodeId>,
    /// Nodes the agent can actually stand on: the tie closure that stops at
    /// nodes where she abandons.
    pub visited: BTreeSet<NodeId>,
    /// Visited nodes with `ζ(v) > β·r`.
    pub abandon_nodes: BTreeSet<NodeId>,
    pub walks: Vec<Vec<NodeId>>,
    /// Set when more walks exist than the cap allowed listing.
    pub truncated: bool,
    pub motivating: bool,
}

pub fn build_view<'a>(
    graph: &'a TaskGraph,
    config: &'a CostConfiguration,
    beta: &Bias,
) -> AgentView<'a> {
    AgentView::new(graph, config, beta)
}

pub fn reachable_by_ties(view: &AgentView<'_>) -> BTreeSet<NodeId> {
    view.reachable_by_ties()
}

/// Simulates the agent for `reward`. A negative reward is never motivating.
pub fn is_motivating(
    graph: &TaskGraph,
    config: &CostConfiguration,
    beta: &Bias,
    reward: &Rational,
) -> WalkReport {
    AgentView::new(graph, config, beta).report(reward)
}

/// The least reward for which `config` is motivating; every reward at or
/// above it motivates, every reward below does not.
pub fn min_motivating_reward(
    graph: &TaskGraph,
    config: &CostConfiguration,
    beta: &Bias,
) -> Rational {
    AgentView::new(graph, config, beta).min_motivating_reward()
}
