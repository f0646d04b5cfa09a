//! Cheapest remaining cost `d`, perceived edge cost `η` and lowest perceived
//! cost `ζ` for a graph under a cost configuration.
//!
//! `d(v)` is the cost of a cheapest `v → t` path with edge costs `c + c̃`,
//! `η(v, w) = c(v, w) + c̃(v, w) + β·d(w)` and `ζ(v)` is the minimum `η` over
//! the edges leaving `v`.

use crate::config::CostConfiguration;
use crate::graph::{EdgeId, GraphError, NodeId, TaskGraph};
use crate::rational::{Bias, Rational};

/// Cheapest cost to the target for every node, `None` where the target is
/// unreachable. One reverse-topological sweep over the given per-edge costs.
pub fn distances_with(graph: &TaskGraph, edge_cost: &[Rational]) -> Vec<Option<Rational>> {
    let mut d: Vec<Option<Rational>> = vec![None; graph.node_count()];
    d[graph.target().0] = Some(Rational::from_integer(0.into()));
    for &v in graph.topological_order().iter().rev() {
        if v == graph.target() {
            continue;
        }
        d[v.0] = best_out(graph, v, edge_cost, &d);
    }
    d
}

pub(crate) fn best_out(
    graph: &TaskGraph,
    v: NodeId,
    edge_cost: &[Rational],
    d: &[Option<Rational>],
) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for &e in graph.out_edges(v) {
        let Some(rest) = &d[graph.edge(e).to.0] else {
            continue;
        };
        let total = &edge_cost[e.0] + rest;
        if best.as_ref().is_none_or(|b| &total < b) {
            best = Some(total);
        }
    }
    best
}

pub(crate) fn expect_total(d: Vec<Option<Rational>>, graph: &TaskGraph) -> Vec<Rational> {
    d.into_iter()
        .enumerate()
        .map(|(i, x)| {
            x.unwrap_or_else(|| {
                panic!(
                    "node {} cannot reach the target; preprocess the graph first",
                    graph.display_name(NodeId(i))
                )
            })
        })
        .collect()
}

/// `d_c̃(v)` for every node, indexed by node id.
///
/// # Panics
///
/// Panics if some node cannot reach the target (the graph was not
/// preprocessed).
pub fn cheapest_costs(graph: &TaskGraph, config: &CostConfiguration) -> Vec<Rational> {
    expect_total(distances_with(graph, &config.effective_costs(graph)), graph)
}

/// `η_c̃(v, w)` for the edge `from → to`.
pub fn perceived_cost(
    graph: &TaskGraph,
    config: &CostConfiguration,
    beta: &Bias,
    from: NodeId,
    to: NodeId,
) -> Result<Rational, GraphError> {
    let edge = graph
        .find_edge(from, to)
        .ok_or(GraphError::UnknownEdge { from, to })?;
    let d = cheapest_costs(graph, config);
    Ok(edge_perceived(graph, config, beta, &d, edge))
}

pub(crate) fn edge_perceived(
    graph: &TaskGraph,
    config: &CostConfiguration,
    beta: &Bias,
    d: &[Rational],
    edge: EdgeId,
) -> Rational {
    config.effective_cost(graph, edge) + beta.discount(&d[graph.edge(edge).to.0])
}

/// `ζ_c̃(v)` together with every edge attaining it.
pub fn lowest_perceived(
    graph: &TaskGraph,
    config: &CostConfiguration,
    beta: &Bias,
    v: NodeId,
) -> Result<(Rational, Vec<EdgeId>), GraphError> {
    if v == graph.target() {
        return Err(GraphError::TargetHasNoChoice);
    }
    let d = cheapest_costs(graph, config);
    let eta: Vec<(EdgeId, Rational)> = graph
        .out_edges(v)
        .iter()
        .map(|&e| (e, edge_perceived(graph, config, beta, &d, e)))
        .collect();
    Ok(argmin(&eta).expect("preprocessed node has an outgoing edge"))
}

/// Minimum value and all keys attaining it, in input order.
pub(crate) fn argmin(values: &[(EdgeId, Rational)]) -> Option<(Rational, Vec<EdgeId>)> {
    let min = values.iter().map(|(_, x)| x).min()?.clone();
    let edges = values
        .iter()
        .filter(|(_, x)| *x == min)
        .map(|(e, _)| *e)
        .collect();
    Some((min, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::rational::{int, rat};

    fn single_edge(cost: i64) -> TaskGraph {
        let mut b = GraphBuilder::new();
        let s = b.add_node("s");
        let t = b.add_node("t");
        b.add_edge(s, t, int(cost));
        b.build(s, t).unwrap()
    }

    #[test]
    fn target_distance_is_zero() {
        let g = single_edge(5);
        let d = cheapest_costs(&g, &CostConfiguration::zero());
        assert_eq!(d[g.target().0], int(0));
        assert_eq!(d[g.source().0], int(5));
    }

    #[test]
    fn unbiased_single_edge() {
        let g = single_edge(5);
        let (z, arg) = lowest_perceived(
            &g,
            &CostConfiguration::zero(),
            &Bias::from_ratio(1, 1),
            g.source(),
        )
        .unwrap();
        assert_eq!(z, int(5));
        assert_eq!(arg, vec![EdgeId(0)]);
    }

    #[test]
    fn target_has_no_choice() {
        let g = single_edge(1);
        assert_eq!(
            lowest_perceived(
                &g,
                &CostConfiguration::zero(),
                &Bias::from_ratio(1, 2),
                g.target()
            ),
            Err(GraphError::TargetHasNoChoice)
        );
    }

    #[test]
    fn unknown_edge() {
        let g = single_edge(1);
        assert!(matches!(
            perceived_cost(
                &g,
                &CostConfiguration::zero(),
                &Bias::from_ratio(1, 2),
                g.target(),
                g.source()
            ),
            Err(GraphError::UnknownEdge { .. })
        ));
    }

    #[test]
    fn extra_cost_shifts_distance() {
        let g = single_edge(1);
        let mut c = CostConfiguration::zero();
        c.set(EdgeId(0), rat(1, 2)).unwrap();
        assert_eq!(cheapest_costs(&g, &c)[0], rat(3, 2));
    }

    #[test]
    #[should_panic(expected = "preprocess")]
    fn dead_end_panics() {
        let mut b = GraphBuilder::new();
        let s = b.add_node("s");
        let t = b.add_node("t");
        let x = b.add_node("x");
        b.add_edge(s, t, int(1));
        b.add_edge(s, x, int(1));
        let g = b.build(s, t).unwrap();
        cheapest_costs(&g, &CostConfiguration::zero());
    }
}
