//! Prohibition: deleting edges instead of charging for them.
//!
//! Any subgraph can be emulated by a cost configuration that charges more
//! than the reward on every removed edge. The brute-force search over edge
//! subsets gives the best reward a prohibition device can reach, for
//! comparison with the penalty infimum.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{exact_infimum, DeviceError, InfimumResult, DEFAULT_PATH_BUDGET};
use crate::config::CostConfiguration;
use crate::graph::{EdgeId, TaskGraph};
use crate::rational::{Bias, Rational};

pub const DEFAULT_EDGE_BUDGET: usize = 20;

/// Charges `reward + 1` on every edge not in `kept`.
pub fn emulate_subgraph(
    graph: &TaskGraph,
    kept: &BTreeSet<EdgeId>,
    reward: &Rational,
) -> Result<CostConfiguration, DeviceError> {
    let (sub, _) = graph.edge_subgraph(|e| kept.contains(&e));
    if !sub.reachable_from_source()[sub.target().0] {
        return Err(DeviceError::Disconnected);
    }
    let block = reward.clone().max(Rational::zero()) + Rational::one();
    let mut config = CostConfiguration::zero();
    for e in graph.edge_ids().filter(|e| !kept.contains(e)) {
        config.set(e, block.clone()).expect("positive extra");
    }
    Ok(config)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgraphOptimum {
    /// Edges of the best subgraph, in the ids of the input graph.
    pub kept: BTreeSet<EdgeId>,
    #[serde(with = "crate::rational::serde_text")]
    pub reward: Rational,
    /// Edge subsets whose agent behaviour was evaluated.
    pub subsets_evaluated: u64,
}

/// Least motivating reward over all subgraphs in which every node lies on
/// an `s → t` path. Ties go to the subgraph with more (higher-id) edges.
pub fn brute_subgraph_opt(
    graph: &TaskGraph,
    beta: &Bias,
    edge_budget: usize,
) -> Result<SubgraphOptimum, DeviceError> {
    let m = graph.edge_count();
    if m > edge_budget.min(63) {
        return Err(DeviceError::BudgetExceeded {
            edges: m,
            budget: edge_budget.min(63),
        });
    }
    let eval = MaskEvaluator::new(graph, beta);
    let full: u64 = if m == 0 { 0 } else { (1u64 << m) - 1 };
    let mut best: Option<(Rational, u64)> = None;
    let mut evaluated = 0u64;
    for mask in (1..=full).rev() {
        if eval.clean(mask) != Some(mask) {
            continue;
        }
        evaluated += 1;
        let r = eval.reward(mask);
        if best.as_ref().is_none_or(|(b, _)| &r < b) {
            best = Some((r, mask));
        }
    }
    let (reward, mask) = best.ok_or(DeviceError::Disconnected)?;
    Ok(SubgraphOptimum {
        kept: mask_edges(mask, m),
        reward,
        subsets_evaluated: evaluated,
    })
}

fn mask_edges(mask: u64, m: usize) -> BTreeSet<EdgeId> {
    (0..m).filter(|i| mask >> i & 1 == 1).map(EdgeId).collect()
}

/// Agent simulation on an edge subset given as a bit mask, without
/// building the subgraph.
pub(crate) struct MaskEvaluator<'g> {
    graph: &'g TaskGraph,
    beta: Bias,
}

impl<'g> MaskEvaluator<'g> {
    pub(crate) fn new(graph: &'g TaskGraph, beta: &Bias) -> Self {
        MaskEvaluator {
            graph,
            beta: beta.clone(),
        }
    }

    fn has(mask: u64, e: EdgeId) -> bool {
        mask >> e.0 & 1 == 1
    }

    /// Edges of `mask` lying on some `s → t` path, or `None` when `t` is
    /// unreachable.
    pub(crate) fn clean(&self, mask: u64) -> Option<u64> {
        let g = self.graph;
        let topo = g.topological_order();
        let mut fwd = vec![false; g.node_count()];
        fwd[g.source().0] = true;
        for &v in topo {
            if fwd[v.0] {
                for &e in g.out_edges(v) {
                    if Self::has(mask, e) {
                        fwd[g.edge(e).to.0] = true;
                    }
                }
            }
        }
        if !fwd[g.target().0] {
            return None;
        }
        let mut bwd = vec![false; g.node_count()];
        bwd[g.target().0] = true;
        for &v in topo.iter().rev() {
            bwd[v.0] |= g
                .out_edges(v)
                .iter()
                .any(|&e| Self::has(mask, e) && bwd[g.edge(e).to.0]);
        }
        let mut cleaned = 0u64;
        for e in g.edge_ids() {
            let edge = g.edge(e);
            if Self::has(mask, e) && fwd[edge.from.0] && bwd[edge.to.0] {
                cleaned |= 1 << e.0;
            }
        }
        Some(cleaned)
    }

    /// Least motivating reward on a clean mask.
    pub(crate) fn reward(&self, mask: u64) -> Rational {
        let g = self.graph;
        let mut d: Vec<Option<Rational>> = vec![None; g.node_count()];
        d[g.target().0] = Some(Rational::zero());
        for &v in g.topological_order().iter().rev() {
            for &e in g.out_edges(v) {
                let edge = g.edge(e);
                if !Self::has(mask, e) {
                    continue;
                }
                if let Some(rest) = &d[edge.to.0] {
                    let total = &edge.cost + rest;
                    if d[v.0].as_ref().is_none_or(|b| &total < b) {
                        d[v.0] = Some(total);
                    }
                }
            }
        }
        let eta = |e: EdgeId| {
            let edge = g.edge(e);
            &edge.cost
                + self
                    .beta
                    .discount(d[edge.to.0].as_ref().expect("clean mask"))
        };
        let mut worst = Rational::zero();
        let mut seen = vec![false; g.node_count()];
        seen[g.source().0] = true;
        let mut stack = vec![g.source()];
        while let Some(v) = stack.pop() {
            if v == g.target() {
                continue;
            }
            let options: Vec<(EdgeId, Rational)> = g
                .out_edges(v)
                .iter()
                .filter(|&&e| Self::has(mask, e))
                .map(|&e| (e, eta(e)))
                .collect();
            let zeta = options
                .iter()
                .map(|(_, x)| x)
                .min()
                .expect("clean mask")
                .clone();
            for (e, x) in &options {
                let w = g.edge(*e).to;
                if *x == zeta && !seen[w.0] {
                    seen[w.0] = true;
                    stack.push(w);
                }
            }
            worst = worst.max(zeta);
        }
        self.beta.undiscount(&worst)
    }
}

/// Penalty infimum next to the prohibition optimum on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub penalty: InfimumResult,
    pub prohibition: SubgraphOptimum,
    /// `prohibition / penalty`, absent when the penalty infimum is zero.
    #[serde(serialize_with = "crate::rational::serde_text::option::serialize")]
    pub ratio: Option<Rational>,
    /// `1/β`, the largest ratio possible on any instance.
    #[serde(with = "crate::rational::serde_text")]
    pub ratio_bound: Rational,
}

impl Comparison {
    pub fn within_bound(&self) -> bool {
        self.ratio.as_ref().is_none_or(|r| r <= &self.ratio_bound)
    }
}

pub fn compare_devices(
    graph: &TaskGraph,
    beta: &Bias,
    edge_budget: usize,
) -> Result<Comparison, DeviceError> {
    let prohibition = brute_subgraph_opt(graph, beta, edge_budget)?;
    let penalty = exact_infimum(graph, beta, DEFAULT_PATH_BUDGET);
    let ratio = (!penalty.value.is_zero()).then(|| &prohibition.reward / &penalty.value);
    Ok(Comparison {
        penalty,
        prohibition,
        ratio,
        ratio_bound: beta.undiscount(&Rational::one()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::{min_motivating_reward, AgentView};
    use crate::graph::GraphBuilder;
    use crate::rational::{int, rat};

    /// s → a → t and a shortcut s → t that lures the agent.
    fn lure() -> TaskGraph {
        let mut b = GraphBuilder::new();
        let s = b.add_node("s");
        let a = b.add_node("a");
        let t = b.add_node("t");
        b.add_edge(s, a, int(1));
        b.add_edge(a, t, int(4));
        b.add_edge(s, t, int(3));
        b.build(s, t).unwrap()
    }

    #[test]
    fn mask_evaluation_matches_the_agent() {
        let g = lure();
        let beta = Bias::from_ratio(1, 2);
        let eval = MaskEvaluator::new(&g, &beta);
        for mask in 1..8u64 {
            let Some(clean) = eval.clean(mask) else {
                continue;
            };
            let (sub, _) = g.edge_subgraph(|e| clean >> e.0 & 1 == 1);
            let sub = sub.preprocess().unwrap();
            let zero = CostConfiguration::zero();
            let expected = AgentView::new(&sub, &zero, &beta).min_motivating_reward();
            assert_eq!(eval.reward(clean), expected, "mask {mask:b}");
        }
        assert_eq!(eval.clean(0b001), None);
        assert_eq!(eval.clean(0b101), Some(0b100));
    }

    #[test]
    fn brute_force_finds_the_best_subgraph() {
        let g = lure();
        let beta = Bias::from_ratio(1, 2);
        // Full graph: s ties between a and t, and ζ(a) = 4 forces 8.
        // Only s → a → t also needs 8; only s → t needs 6.
        let opt = brute_subgraph_opt(&g, &beta, DEFAULT_EDGE_BUDGET).unwrap();
        assert_eq!(opt.reward, int(6));
        assert_eq!(opt.kept, BTreeSet::from([EdgeId(2)]));
        assert_eq!(opt.subsets_evaluated, 3);
    }

    #[test]
    fn emulation_reproduces_the_subgraph() {
        let g = lure();
        let beta = Bias::from_ratio(1, 2);
        let kept = BTreeSet::from([EdgeId(0), EdgeId(1)]);
        let cfg = emulate_subgraph(&g, &kept, &int(8)).unwrap();
        assert_eq!(cfg.get(EdgeId(2)), int(9));
        assert_eq!(min_motivating_reward(&g, &cfg, &beta), int(8));
        assert!(matches!(
            emulate_subgraph(&g, &BTreeSet::from([EdgeId(0)]), &int(1)),
            Err(DeviceError::Disconnected)
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let g = lure();
        assert!(matches!(
            brute_subgraph_opt(&g, &Bias::from_ratio(1, 2), 2),
            Err(DeviceError::BudgetExceeded {
                edges: 3,
                budget: 2
            })
        ));
    }

    #[test]
    fn comparison_respects_the_bound() {
        let g = lure();
        let c = compare_devices(&g, &Bias::from_ratio(1, 2), DEFAULT_EDGE_BUDGET).unwrap();
        assert!(c.within_bound());
        assert_eq!(c.ratio_bound, int(2));
        assert!(c.ratio.unwrap() >= rat(1, 1));
    }
}
