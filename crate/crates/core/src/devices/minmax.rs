//! The minmax path and the fence built around it.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;
use serde::Serialize;

use super::{DeviceError, Path};
use crate::agent::AgentView;
use crate::config::CostConfiguration;
use crate::graph::{EdgeId, NodeId, TaskGraph};
use crate::perceived::cheapest_costs;
use crate::rational::{Bias, Rational};

/// Perceived costs `η` under the trivial configuration.
fn base_eta(graph: &TaskGraph, beta: &Bias) -> Vec<Rational> {
    let zero = CostConfiguration::zero();
    let view = AgentView::new(graph, &zero, beta);
    graph.edge_ids().map(|e| view.eta(e).clone()).collect()
}

/// An `s → t` path minimising the largest base `η` on it, together with
/// that value `ρ`.
///
/// Edges are inserted in non-decreasing `η` order (ties by edge id) until
/// `t` becomes reachable; the path is then read off by breadth-first search
/// over the inserted edges.
pub fn minmax_path(graph: &TaskGraph, beta: &Bias) -> (Path, Rational) {
    let eta = base_eta(graph, beta);
    let mut order: Vec<EdgeId> = graph.edge_ids().collect();
    order.sort_by(|a, b| eta[a.0].cmp(&eta[b.0]));

    let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); graph.node_count()];
    for e in order {
        adj[graph.edge(e).from.0].push(e);
        if let Some(nodes) = bfs_path(graph, &adj) {
            let path = Path::from_nodes_unchecked(nodes);
            let rho = path
                .edges(graph)
                .iter()
                .map(|e| eta[e.0].clone())
                .max()
                .unwrap_or_else(Rational::zero);
            return (path, rho);
        }
    }
    unreachable!("a preprocessed graph has an s-t path")
}

fn bfs_path(graph: &TaskGraph, adj: &[Vec<EdgeId>]) -> Option<Vec<NodeId>> {
    let mut parent: Vec<Option<NodeId>> = vec![None; graph.node_count()];
    let mut seen = vec![false; graph.node_count()];
    seen[graph.source().0] = true;
    let mut queue = VecDeque::from([graph.source()]);
    while let Some(v) = queue.pop_front() {
        if v == graph.target() {
            let mut nodes = vec![v];
            let mut cur = v;
            while let Some(p) = parent[cur.0] {
                nodes.push(p);
                cur = p;
            }
            nodes.reverse();
            return Some(nodes);
        }
        for &e in &adj[v.0] {
            let w = graph.edge(e).to;
            if !seen[w.0] {
                seen[w.0] = true;
                parent[w.0] = Some(v);
                queue.push_back(w);
            }
        }
    }
    None
}

/// `B(v)`: the least possible largest base `η` over `s → v` paths. `B(t)`
/// is `ρ`.
pub fn prefix_bottlenecks(graph: &TaskGraph, beta: &Bias) -> Vec<Rational> {
    let eta = base_eta(graph, beta);
    let mut b: Vec<Option<Rational>> = vec![None; graph.node_count()];
    b[graph.source().0] = Some(Rational::zero());
    for &v in graph.topological_order() {
        let Some(here) = b[v.0].clone() else { continue };
        for &e in graph.out_edges(v) {
            let w = graph.edge(e).to;
            let via = here.clone().max(eta[e.0].clone());
            if b[w.0].as_ref().is_none_or(|cur| via < *cur) {
                b[w.0] = Some(via);
            }
        }
    }
    b.into_iter()
        .map(|x| x.expect("every node is reachable from the source"))
        .collect()
}

/// `ς(v)`: the successor of `v` on a cheapest path, lowest node id among
/// ties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuccessorMap {
    succ: Vec<Option<NodeId>>,
    target: NodeId,
}

impl SuccessorMap {
    pub fn get(&self, v: NodeId) -> Option<NodeId> {
        self.succ[v.0]
    }

    /// The cheapest path `v, ς(v), ς(ς(v)), …, t`.
    pub fn path_from(&self, v: NodeId) -> Vec<NodeId> {
        let mut nodes = vec![v];
        let mut cur = v;
        while let Some(next) = self.succ[cur.0] {
            nodes.push(next);
            cur = next;
        }
        debug_assert_eq!(cur, self.target);
        nodes
    }
}

pub fn successor_map(graph: &TaskGraph) -> SuccessorMap {
    let d = cheapest_costs(graph, &CostConfiguration::zero());
    let succ = graph
        .nodes()
        .map(|v| {
            graph
                .out_edges(v)
                .iter()
                .map(|&e| graph.edge(e))
                .filter(|edge| &edge.cost + &d[edge.to.0] == d[v.0])
                .map(|edge| edge.to)
                .min()
        })
        .collect();
    SuccessorMap {
        succ,
        target: graph.target(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxResult {
    pub config: CostConfiguration,
    pub minmax_path: Path,
    pub rho: Rational,
    /// `2ρ/β`; the configuration motivates at this reward.
    pub guaranteed_reward: Rational,
    /// `ρ/β`; no configuration motivates below this reward.
    pub lower_bound: Rational,
}

/// A configuration motivating at `2ρ/β`, at most twice the best achievable.
///
/// Edges on the minmax path `P` and cheapest-path edges `(v, ς(v))` off `P`
/// are free. Other non-`ς` edges cost `3ρ/β` extra. An edge `(v, ς(v))`
/// leaving `P` costs as much extra as the dearest edge on the cheapest path
/// from `v` up to where it rejoins `P`.
pub fn minmax_path_approx(graph: &TaskGraph, beta: &Bias) -> Result<ApproxResult, DeviceError> {
    let (path, rho) = minmax_path(graph, beta);
    let sigma = successor_map(graph);
    let on_path: Vec<bool> = {
        let mut mark = vec![false; graph.node_count()];
        for &v in path.nodes() {
            mark[v.0] = true;
        }
        mark
    };
    let path_edges: BTreeSet<EdgeId> = path.edges(graph).into_iter().collect();
    let block = beta.undiscount(&(&rho * Rational::from_integer(3.into())));

    let mut config = CostConfiguration::zero();
    for e in graph.edge_ids() {
        let edge = graph.edge(e);
        let is_sigma = sigma.get(edge.from) == Some(edge.to);
        let extra = if path_edges.contains(&e) || (is_sigma && !on_path[edge.from.0]) {
            continue;
        } else if !is_sigma {
            block.clone()
        } else {
            rejoin_toll(graph, &sigma, &on_path, edge.from)
        };
        config.set(e, extra).expect("extra costs are nonnegative");
    }

    let guaranteed_reward = beta.undiscount(&(&rho * Rational::from_integer(2.into())));
    verify(graph, beta, &config, &guaranteed_reward)?;
    Ok(ApproxResult {
        config,
        minmax_path: path,
        lower_bound: beta.undiscount(&rho),
        rho,
        guaranteed_reward,
    })
}

/// Largest base cost on the `ς`-path from `v` up to its next node on `P`.
fn rejoin_toll(graph: &TaskGraph, sigma: &SuccessorMap, on_path: &[bool], v: NodeId) -> Rational {
    let mut worst = Rational::zero();
    let mut cur = v;
    while let Some(next) = sigma.get(cur) {
        let e = graph.find_edge(cur, next).expect("successor edge exists");
        worst = worst.max(graph.edge(e).cost.clone());
        if on_path[next.0] {
            break;
        }
        cur = next;
    }
    worst
}

fn verify(
    graph: &TaskGraph,
    beta: &Bias,
    config: &CostConfiguration,
    reward: &Rational,
) -> Result<(), DeviceError> {
    let view = AgentView::new(graph, config, beta);
    let report = view.report_capped(reward, 1);
    if !report.motivating {
        return Err(DeviceError::InternalVerificationFailed(format!(
            "the agent abandons at reward {reward}"
        )));
    }
    let base = cheapest_costs(graph, &CostConfiguration::zero());
    let two = Rational::from_integer(2.into());
    for v in graph.nodes() {
        if view.d(v) > &(&two * &base[v.0]) {
            return Err(DeviceError::InternalVerificationFailed(format!(
                "cheapest cost at {} more than doubled",
                graph.display_name(v)
            )));
        }
    }
    Ok(())
}
