#![allow(dead_code)]

use std::collections::BTreeSet;

use penalty_planner::config::CostConfiguration;
use penalty_planner::graph::{NodeId, TaskGraph};
use penalty_planner::instances::{gen_random, Instance, RandomSpec};
use penalty_planner::rational::{rat, Bias, Rational};
use penalty_planner::reductions::CnfFormula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const BETAS: [(i64, i64); 6] = [(1, 5), (1, 3), (1, 2), (2, 3), (3, 4), (9, 10)];

/// Random instance with `2..=n_max` nodes and a random bias.
pub fn random_instance(seed: u64, n_max: usize, max_edges: usize) -> Instance {
    let mut r = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    loop {
        let n = r.gen_range(2..=n_max);
        let density = r.gen_range(0.15..0.7);
        let (bn, bd) = BETAS[r.gen_range(0..BETAS.len())];
        let spec = RandomSpec {
            n,
            density,
            max_numer: 8,
            max_denom: 6,
            seed: r.gen(),
            beta: Bias::from_ratio(bn, bd),
        };
        let inst = gen_random(&spec).expect("valid spec");
        if inst.graph.edge_count() <= max_edges {
            return inst;
        }
    }
}

/// Random extra costs: each edge charged with probability one half.
pub fn random_config(graph: &TaskGraph, r: &mut ChaCha8Rng) -> CostConfiguration {
    let values: Vec<Rational> = graph
        .edge_ids()
        .map(|_| {
            if r.gen_bool(0.5) {
                rat(r.gen_range(0..6), r.gen_range(1..5))
            } else {
                rat(0, 1)
            }
        })
        .collect();
    CostConfiguration::from_dense(&values).unwrap()
}

/// Every `v → t` path, by depth-first enumeration.
pub fn all_paths_from(graph: &TaskGraph, v: NodeId) -> Vec<Vec<NodeId>> {
    fn go(g: &TaskGraph, prefix: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        let v = *prefix.last().unwrap();
        if v == g.target() {
            out.push(prefix.clone());
            return;
        }
        for &e in g.out_edges(v) {
            prefix.push(g.edge(e).to);
            go(g, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(graph, &mut vec![v], &mut out);
    out
}

pub fn path_cost(graph: &TaskGraph, config: &CostConfiguration, path: &[NodeId]) -> Rational {
    path.windows(2)
        .map(|p| config.effective_cost(graph, graph.find_edge(p[0], p[1]).unwrap()))
        .fold(rat(0, 1), |a, b| a + b)
}

/// Cheapest remaining cost by enumerating every path.
pub fn oracle_d(graph: &TaskGraph, config: &CostConfiguration, v: NodeId) -> Rational {
    all_paths_from(graph, v)
        .iter()
        .map(|p| path_cost(graph, config, p))
        .min()
        .expect("node reaches t")
}

/// Agent simulation from first principles: perceived cost of every edge
/// from enumerated path costs, then exploration of every tie choice.
/// Returns (motivating, nodes she can stand on).
pub fn oracle_agent(
    graph: &TaskGraph,
    config: &CostConfiguration,
    beta: &Bias,
    reward: &Rational,
) -> (bool, BTreeSet<NodeId>) {
    let d: Vec<Rational> = graph.nodes().map(|v| oracle_d(graph, config, v)).collect();
    let mut visited = BTreeSet::from([graph.source()]);
    let mut stack = vec![graph.source()];
    let mut motivating = true;
    while let Some(v) = stack.pop() {
        if v == graph.target() {
            continue;
        }
        let etas: Vec<(NodeId, Rational)> = graph
            .out_edges(v)
            .iter()
            .map(|&e| {
                let w = graph.edge(e).to;
                (w, config.effective_cost(graph, e) + beta.value() * &d[w.0])
            })
            .collect();
        let zeta = etas.iter().map(|(_, x)| x.clone()).min().unwrap();
        if zeta > beta.value() * reward {
            motivating = false;
            continue;
        }
        for (w, x) in etas {
            if x == zeta && visited.insert(w) {
                stack.push(w);
            }
        }
    }
    (motivating, visited)
}

/// Smallest reward at which the oracle agent is motivated: the largest
/// `ζ/β` over nodes reachable by ties at an unbounded reward.
pub fn oracle_min_reward(graph: &TaskGraph, config: &CostConfiguration, beta: &Bias) -> Rational {
    let huge = rat(1_000_000_000, 1);
    let (_, reachable) = oracle_agent(graph, config, beta, &huge);
    let d: Vec<Rational> = graph.nodes().map(|v| oracle_d(graph, config, v)).collect();
    reachable
        .into_iter()
        .filter(|&v| v != graph.target())
        .map(|v| {
            graph
                .out_edges(v)
                .iter()
                .map(|&e| config.effective_cost(graph, e) + beta.value() * &d[graph.edge(e).to.0])
                .min()
                .unwrap()
        })
        .max()
        .map(|z| z / beta.value())
        .unwrap_or_else(|| rat(0, 1))
}

/// All clauses over `vars` variables as nondecreasing literal triples, each
/// literal encoded DIMACS-style.
pub fn clauses_over(vars: i64) -> Vec<[i64; 3]> {
    let lits: Vec<i64> = (1..=vars).flat_map(|v| [v, -v]).collect();
    let n = lits.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                out.push([lits[a], lits[b], lits[c]]);
            }
        }
    }
    out
}

/// Every multiset of `len` clauses drawn from `clauses`.
pub fn clause_multisets(clauses: &[[i64; 3]], len: usize) -> Vec<Vec<[i64; 3]>> {
    fn go(
        cl: &[[i64; 3]],
        start: usize,
        len: usize,
        cur: &mut Vec<[i64; 3]>,
        out: &mut Vec<Vec<[i64; 3]>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..cl.len() {
            cur.push(cl[i]);
            go(cl, i, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(clauses, 0, len, &mut Vec::new(), &mut out);
    out
}

/// Small 3-CNF family: every formula over one variable, every formula over
/// two variables with at most two clauses, and a seeded sample of at most
/// `sample` formulas from each remaining size class.
pub fn small_formulas(sample: usize) -> Vec<CnfFormula> {
    use rand::seq::SliceRandom;
    let mut r = rng(2024);
    let mut out = Vec::new();
    for vars in 1..=3i64 {
        let clauses = clauses_over(vars);
        for len in 1..=3 {
            let mut all = clause_multisets(&clauses, len);
            let exhaustive = vars == 1 || (vars == 2 && len <= 2);
            if !exhaustive && all.len() > sample {
                all.shuffle(&mut r);
                all.truncate(sample);
            }
            out.extend(
                all.into_iter()
                    .map(|cs| CnfFormula::from_ints(vars as usize, &cs).unwrap()),
            );
        }
    }
    out
}
