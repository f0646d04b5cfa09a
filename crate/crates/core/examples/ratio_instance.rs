//! Penalties beat prohibition by almost 1/β on the ladder instance.

use std::collections::BTreeSet;

use penalty_planner::agent::min_motivating_reward;
use penalty_planner::config::CostConfiguration;
use penalty_planner::instances::gen_ratio;
use penalty_planner::rational::{rat, Bias};

fn main() {
    let beta = Bias::from_ratio(1, 2);
    let eps = rat(1, 2);
    let inst = gen_ratio(&beta, &eps).unwrap();
    let g = &inst.graph;
    let w = g.resolve_node("w").unwrap();

    let mut config = CostConfiguration::zero();
    for &e in g.in_edges(w) {
        config.set(e, eps.clone()).unwrap();
    }
    println!(
        "{} nodes; fee {eps} on every shortcut: least reward {}",
        g.node_count(),
        min_motivating_reward(g, &config, &beta)
    );

    let shortcuts: Vec<_> = g.in_edges(w).to_vec();
    for k in [0, 1, 16, 33, 64] {
        let cut: BTreeSet<_> = shortcuts[..k].iter().copied().collect();
        let (sub, _) = g.edge_subgraph(|e| !cut.contains(&e));
        let sub = sub.preprocess().unwrap();
        let r = min_motivating_reward(&sub, &CostConfiguration::zero(), &beta);
        println!("first {k} shortcuts removed: least reward {r}");
    }
}
