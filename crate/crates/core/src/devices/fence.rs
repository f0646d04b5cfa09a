//! Penalty fences along a fixed path.
//!
//! Nodes of the path are processed from the one before `t` back to `s`. At
//! `v_i` every edge leaving the path gets just enough extra cost that its
//! perceived cost exceeds that of the path edge by a margin. Fencing `v_i`
//! only changes `d` at `v_i` and its ancestors, so the path edges already
//! handled keep their perceived cost.

use num_traits::{Signed, Zero};

use super::{DeviceError, Path};
use crate::config::CostConfiguration;
use crate::graph::{EdgeId, NodeId, TaskGraph};
use crate::perceived::{best_out, cheapest_costs};
use crate::rational::{Bias, Rational};

/// Margin `β·ε / max(1, m − 2)` for a path with `m` nodes.
pub fn fence_margin(beta: &Bias, epsilon: &Rational, path_len: usize) -> Rational {
    let k = path_len.saturating_sub(2).max(1);
    beta.discount(epsilon) / Rational::from_integer(k.into())
}

/// Configuration charging only edges that leave `path`, after which every
/// tie-walk follows `path` and the least motivating reward exceeds
/// [`fence_required_reward`] by at most `ε`.
pub fn path_and_fence(
    graph: &TaskGraph,
    beta: &Bias,
    path: &Path,
    epsilon: &Rational,
) -> Result<CostConfiguration, DeviceError> {
    if !epsilon.is_positive() {
        return Err(DeviceError::NonPositiveEpsilon(epsilon.clone()));
    }
    let margin = fence_margin(beta, epsilon, path.len());
    let mut fencer = Fencer::new(graph, beta);
    fencer.fence_path(path, &margin);
    Ok(fencer.config())
}

/// `max η(v_i, v_{i+1}) / β` along `path` once every earlier path node has
/// been fenced with zero margin: the infimum of the rewards reachable by
/// fencing `path` as `ε → 0`.
pub fn fence_required_reward(graph: &TaskGraph, beta: &Bias, path: &Path) -> Rational {
    let mut fencer = Fencer::new(graph, beta);
    let worst = fencer.fence_path(path, &Rational::zero());
    beta.undiscount(&worst)
}

/// Effective costs and distances while fencing proceeds backwards.
#[derive(Debug, Clone)]
pub(crate) struct Fencer<'g> {
    graph: &'g TaskGraph,
    beta: Bias,
    costs: Vec<Rational>,
    d: Vec<Option<Rational>>,
}

/// What [`Fencer::fence`] overwrote.
#[derive(Debug)]
pub(crate) struct Undo {
    costs: Vec<(EdgeId, Rational)>,
    d: Vec<(NodeId, Option<Rational>)>,
}

impl<'g> Fencer<'g> {
    pub(crate) fn new(graph: &'g TaskGraph, beta: &Bias) -> Self {
        let d = cheapest_costs(graph, &CostConfiguration::zero());
        Fencer {
            graph,
            beta: beta.clone(),
            costs: graph.edges().iter().map(|e| e.cost.clone()).collect(),
            d: d.into_iter().map(Some).collect(),
        }
    }

    pub(crate) fn d(&self, v: NodeId) -> &Rational {
        self.d[v.0].as_ref().expect("every node reaches the target")
    }

    /// Current perceived cost of `e`.
    pub(crate) fn eta(&self, e: EdgeId) -> Rational {
        &self.costs[e.0] + self.beta.discount(self.d(self.graph.edge(e).to))
    }

    /// Fences the whole path and returns the largest path-edge `η`.
    fn fence_path(&mut self, path: &Path, margin: &Rational) -> Rational {
        let edges = path.edges(self.graph);
        let mut worst = Rational::zero();
        for &e in edges.iter().rev() {
            let (eta, _) = self.fence(e, margin);
            worst = worst.max(eta);
        }
        worst
    }

    /// Raises every sibling of `on` to `η(on) + margin` and refreshes `d`
    /// upstream. Returns `η(on)`, which the fence leaves unchanged.
    pub(crate) fn fence(&mut self, on: EdgeId, margin: &Rational) -> (Rational, Undo) {
        let graph = self.graph;
        let u = graph.edge(on).from;
        let eta_on = self.eta(on);
        let mut undo = Undo {
            costs: Vec::new(),
            d: Vec::new(),
        };
        for &e in graph.out_edges(u) {
            if e == on {
                continue;
            }
            let gap = &eta_on - self.eta(e) + margin;
            if gap.is_positive() {
                undo.costs.push((e, self.costs[e.0].clone()));
                self.costs[e.0] += gap;
            }
        }
        if !undo.costs.is_empty() {
            let topo = graph.topological_order();
            for &v in topo[..=graph.topo_position(u)].iter().rev() {
                let fresh = best_out(graph, v, &self.costs, &self.d);
                if fresh != self.d[v.0] {
                    undo.d.push((v, std::mem::replace(&mut self.d[v.0], fresh)));
                }
            }
        }
        (eta_on, undo)
    }

    pub(crate) fn restore(&mut self, undo: Undo) {
        for (e, c) in undo.costs {
            self.costs[e.0] = c;
        }
        for (v, d) in undo.d {
            self.d[v.0] = d;
        }
    }

    pub(crate) fn config(&self) -> CostConfiguration {
        let extra: Vec<Rational> = self
            .graph
            .edges()
            .iter()
            .zip(&self.costs)
            .map(|(e, c)| c - &e.cost)
            .collect();
        CostConfiguration::from_dense(&extra).expect("fences only raise costs")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::{is_motivating, min_motivating_reward};
    use crate::graph::GraphBuilder;
    use crate::rational::{int, rat};

    /// s → a → t costs 1 + 1, shortcut s → t costs 3/2.
    fn shortcut() -> TaskGraph {
        let mut b = GraphBuilder::new();
        let s = b.add_node("s");
        let a = b.add_node("a");
        let t = b.add_node("t");
        b.add_edge(s, a, int(1));
        b.add_edge(a, t, int(1));
        b.add_edge(s, t, rat(3, 2));
        b.build(s, t).unwrap()
    }

    #[test]
    fn margin_divisor_is_clamped() {
        let beta = Bias::from_ratio(1, 2);
        assert_eq!(fence_margin(&beta, &int(1), 2), rat(1, 2));
        assert_eq!(fence_margin(&beta, &int(1), 3), rat(1, 2));
        assert_eq!(fence_margin(&beta, &int(1), 6), rat(1, 8));
    }

    #[test]
    fn fencing_the_long_path() {
        let g = shortcut();
        let beta = Bias::from_ratio(1, 2);
        let p = Path::parse(&g, "s,a,t").unwrap();
        // η(s,a) = 1 + 1/2, η(s,t) = 3/2: the shortcut needs exactly ε/2 more.
        let cfg = path_and_fence(&g, &beta, &p, &rat(1, 5)).unwrap();
        assert_eq!(cfg.get(EdgeId(2)), rat(1, 10));
        assert_eq!(cfg.len(), 1);
        let r = min_motivating_reward(&g, &cfg, &beta);
        assert_eq!(r, int(3));
        assert_eq!(fence_required_reward(&g, &beta, &p), int(3));
        let report = is_motivating(&g, &cfg, &beta, &r);
        assert_eq!(report.walks, vec![p.nodes().to_vec()]);
    }

    #[test]
    fn direct_path_needs_no_fence() {
        let g = shortcut();
        let beta = Bias::from_ratio(1, 2);
        let p = Path::parse(&g, "s,t").unwrap();
        let cfg = path_and_fence(&g, &beta, &p, &rat(1, 5)).unwrap();
        // η(s,a) and η(s,t) tie at 3/2, so only the margin is charged.
        assert_eq!(cfg.get(EdgeId(0)), rat(1, 10));
        assert_eq!(fence_required_reward(&g, &beta, &p), int(3));
    }

    #[test]
    fn epsilon_must_be_positive() {
        let g = shortcut();
        let p = Path::parse(&g, "s,t").unwrap();
        assert!(matches!(
            path_and_fence(&g, &Bias::from_ratio(1, 2), &p, &int(0)),
            Err(DeviceError::NonPositiveEpsilon(_))
        ));
    }

    #[test]
    fn undo_restores_state() {
        let g = shortcut();
        let beta = Bias::from_ratio(1, 2);
        let mut f = Fencer::new(&g, &beta);
        let before = f.clone();
        let (_, undo) = f.fence(EdgeId(0), &int(1));
        assert!(!f.config().is_trivial());
        f.restore(undo);
        assert_eq!(f.costs, before.costs);
        assert_eq!(f.d, before.d);
    }
}
