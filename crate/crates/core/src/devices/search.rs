//! Exact infimum of the motivating reward over all fenced paths.
//!
//! Paths are grown backwards from `t`. Because fencing a node only touches
//! its ancestors, the perceived cost of every edge in a suffix is final as
//! soon as the suffix is fixed, so a partial suffix already yields part of
//! the objective. Together with the prefix bottleneck `B(u)` this gives a
//! lower bound for every completion and the search can prune.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::fence::Fencer;
use super::minmax::prefix_bottlenecks;
use super::Path;
use crate::graph::{EdgeId, NodeId, TaskGraph};
use crate::rational::{Bias, Rational};

pub const DEFAULT_PATH_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Complete paths to evaluate before giving up; at least one always is.
    pub path_budget: usize,
    /// Worker threads; `1` searches on the calling thread.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            path_budget: DEFAULT_PATH_BUDGET,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfimumResult {
    /// Smallest required reward found.
    #[serde(with = "crate::rational::serde_text")]
    pub value: Rational,
    pub witness: Path,
    /// Set when the budget ran out; `value` is then only an upper bound.
    pub exhausted: bool,
    pub paths_evaluated: usize,
}

pub fn exact_infimum(graph: &TaskGraph, beta: &Bias, path_budget: usize) -> InfimumResult {
    exact_infimum_with(
        graph,
        beta,
        &SearchOptions {
            path_budget,
            threads: 1,
        },
    )
}

/// The result does not depend on `threads`, provided the budget suffices.
pub fn exact_infimum_with(
    graph: &TaskGraph,
    beta: &Bias,
    options: &SearchOptions,
) -> InfimumResult {
    let shared = Shared {
        incumbent: Mutex::new(None),
        evaluated: AtomicUsize::new(0),
        exhausted: AtomicBool::new(false),
        budget: options.path_budget.max(1),
    };
    let root = Fencer::new(graph, beta);
    let bottleneck = prefix_bottlenecks(graph, beta);

    // Top-level branches are the edges into t, most promising first.
    let mut branches: Vec<(Rational, EdgeId)> = graph
        .in_edges(graph.target())
        .iter()
        .map(|&e| {
            (
                child_bound(graph, &root, &bottleneck, &Rational::zero(), e),
                e,
            )
        })
        .collect();
    branches.sort();

    let run = |&(_, e): &(Rational, EdgeId)| {
        let mut branch = Branch {
            graph,
            fencer: root.clone(),
            bottleneck: &bottleneck,
            shared: &shared,
            suffix: vec![graph.target()],
            best: None,
        };
        branch.descend(e, Rational::zero());
        branch.best
    };

    let found: Vec<Option<(Rational, Vec<NodeId>)>> = if options.threads <= 1 {
        branches.iter().map(run).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .expect("thread pool")
            .install(|| branches.par_iter().map(run).collect())
    };

    // Earliest branch wins ties so the witness is independent of scheduling.
    let (value, mut suffix) = found
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("at least one path is evaluated");
    suffix.reverse();
    InfimumResult {
        value: beta.undiscount(&value),
        witness: Path::from_nodes_unchecked(suffix),
        exhausted: shared.exhausted.load(Ordering::SeqCst),
        paths_evaluated: shared.evaluated.load(Ordering::SeqCst).min(shared.budget),
    }
}

struct Shared {
    /// Best largest-`η` found by any branch.
    incumbent: Mutex<Option<Rational>>,
    evaluated: AtomicUsize,
    exhausted: AtomicBool,
    budget: usize,
}

/// Lower bound on the largest `η` of any path using `e` after the suffix
/// whose largest `η` is `suffix_max`.
fn child_bound(
    graph: &TaskGraph,
    fencer: &Fencer<'_>,
    bottleneck: &[Rational],
    suffix_max: &Rational,
    e: EdgeId,
) -> Rational {
    let u = graph.edge(e).from;
    suffix_max
        .clone()
        .max(fencer.eta(e))
        .max(bottleneck[u.0].clone())
}

struct Branch<'a, 'g> {
    graph: &'g TaskGraph,
    fencer: Fencer<'g>,
    bottleneck: &'a [Rational],
    shared: &'a Shared,
    /// `t, …, head`.
    suffix: Vec<NodeId>,
    best: Option<(Rational, Vec<NodeId>)>,
}

impl Branch<'_, '_> {
    fn pruned(&self, bound: &Rational) -> bool {
        if self.best.as_ref().is_some_and(|(b, _)| bound >= b) {
            return true;
        }
        let global = self.shared.incumbent.lock().expect("incumbent lock");
        global.as_ref().is_some_and(|g| bound > g)
    }

    /// Prepends edge `e` to the suffix and explores every extension.
    fn descend(&mut self, e: EdgeId, suffix_max: Rational) {
        if self.shared.exhausted.load(Ordering::Relaxed) {
            return;
        }
        let u = self.graph.edge(e).from;
        let (eta_on, undo) = self.fencer.fence(e, &Rational::zero());
        let max_eta = suffix_max.max(eta_on);
        self.suffix.push(u);

        if u == self.graph.source() {
            self.complete(max_eta);
        } else {
            let mut children: Vec<(Rational, EdgeId)> = self
                .graph
                .in_edges(u)
                .iter()
                .map(|&c| {
                    let b = child_bound(self.graph, &self.fencer, self.bottleneck, &max_eta, c);
                    (b, c)
                })
                .collect();
            children.sort();
            for (bound, c) in children {
                if self.pruned(&bound) {
                    // Later children have bounds at least as large.
                    break;
                }
                self.descend(c, max_eta.clone());
            }
        }

        self.suffix.pop();
        self.fencer.restore(undo);
    }

    fn complete(&mut self, max_eta: Rational) {
        if self.shared.evaluated.fetch_add(1, Ordering::SeqCst) >= self.shared.budget {
            self.shared.exhausted.store(true, Ordering::SeqCst);
            return;
        }
        if self.best.as_ref().is_some_and(|(b, _)| &max_eta >= b) {
            return;
        }
        {
            let mut global = self.shared.incumbent.lock().expect("incumbent lock");
            if global.as_ref().is_none_or(|g| &max_eta < g) {
                *global = Some(max_eta.clone());
            }
        }
        self.best = Some((max_eta, self.suffix.clone()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devices::fence_required_reward;
    use crate::graph::GraphBuilder;
    use crate::rational::int;

    /// Brute force over every path.
    fn oracle(graph: &TaskGraph, beta: &Bias) -> Rational {
        fn walk(g: &TaskGraph, beta: &Bias, prefix: &mut Vec<NodeId>, best: &mut Option<Rational>) {
            let v = *prefix.last().unwrap();
            if v == g.target() {
                let p = Path::new(g, prefix.clone()).unwrap();
                let r = fence_required_reward(g, beta, &p);
                if best.as_ref().is_none_or(|b| &r < b) {
                    *best = Some(r);
                }
                return;
            }
            for &e in g.out_edges(v) {
                prefix.push(g.edge(e).to);
                walk(g, beta, prefix, best);
                prefix.pop();
            }
        }
        let mut best = None;
        walk(graph, beta, &mut vec![graph.source()], &mut best);
        best.unwrap()
    }

    fn ladder() -> TaskGraph {
        let mut b = GraphBuilder::new();
        let n: Vec<NodeId> = (0..6).map(|i| b.add_node(format!("n{i}"))).collect();
        let costs = [
            (0, 1, 1),
            (0, 2, 2),
            (1, 2, 1),
            (1, 3, 4),
            (2, 3, 1),
            (2, 4, 3),
            (3, 4, 1),
            (3, 5, 5),
            (4, 5, 2),
            (1, 5, 7),
        ];
        for (u, v, c) in costs {
            b.add_edge(n[u], n[v], int(c));
        }
        b.build(n[0], n[5]).unwrap()
    }

    #[test]
    fn matches_path_enumeration() {
        let g = ladder();
        for beta in [
            Bias::from_ratio(1, 3),
            Bias::from_ratio(1, 2),
            Bias::from_ratio(9, 10),
        ] {
            let r = exact_infimum(&g, &beta, DEFAULT_PATH_BUDGET);
            assert!(!r.exhausted);
            assert_eq!(r.value, oracle(&g, &beta));
            assert_eq!(fence_required_reward(&g, &beta, &r.witness), r.value);
        }
    }

    #[test]
    fn threads_do_not_change_the_answer() {
        let g = ladder();
        let beta = Bias::from_ratio(2, 5);
        let serial = exact_infimum(&g, &beta, DEFAULT_PATH_BUDGET);
        let options = SearchOptions {
            threads: 4,
            ..SearchOptions::default()
        };
        let parallel = exact_infimum_with(&g, &beta, &options);
        assert_eq!(serial.value, parallel.value);
        assert_eq!(serial.witness, parallel.witness);
    }

    #[test]
    fn tiny_budget_is_flagged() {
        let g = ladder();
        let r = exact_infimum(&g, &Bias::from_ratio(1, 2), 1);
        assert_eq!(r.paths_evaluated, 1);
        assert!(r.value >= oracle(&g, &Bias::from_ratio(1, 2)));
    }
}
