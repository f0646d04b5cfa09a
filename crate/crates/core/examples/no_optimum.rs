//! Seven nodes where rewards approach 1/β but never reach it.

use penalty_planner::agent::{min_motivating_reward, AgentView};
use penalty_planner::config::CostConfiguration;
use penalty_planner::devices::{exact_infimum, DEFAULT_PATH_BUDGET};
use penalty_planner::instances::gen_noopt;
use penalty_planner::rational::{Bias, Rational};

fn main() {
    let beta = Bias::from_ratio(1, 5);
    let g = gen_noopt(&beta).unwrap().graph;
    let zero = CostConfiguration::zero();
    let view = AgentView::new(&g, &zero, &beta);
    let v1 = g.resolve_node("v1").unwrap();
    println!(
        "ties at v1 without fees: {} argmin edges",
        view.argmin(v1).len()
    );
    println!(
        "infimum {}",
        exact_infimum(&g, &beta, DEFAULT_PATH_BUDGET).value
    );

    let upper = g.find_edge(v1, g.resolve_node("w").unwrap()).unwrap();
    for k in 1..=8 {
        let eps = Rational::new(1.into(), (1i64 << k).into());
        let mut config = CostConfiguration::zero();
        config.set(upper, eps.clone()).unwrap();
        println!(
            "fee {eps} on (v1, w): least reward {}",
            min_motivating_reward(&g, &config, &beta)
        );
    }
}
