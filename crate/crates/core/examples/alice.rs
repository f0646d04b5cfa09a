//! Alice's course: ten weeks of homework or one presentation.

use penalty_planner::agent::AgentView;
use penalty_planner::config::CostConfiguration;
use penalty_planner::instances::gen_alice;
use penalty_planner::rational::{int, rat, Bias};

fn main() {
    let beta = Bias::from_ratio(1, 3);
    let inst = gen_alice(10, &beta, &int(6)).unwrap();
    let g = &inst.graph;
    let zero = CostConfiguration::zero();
    let view = AgentView::new(g, &zero, &beta);

    println!("least motivating reward: {}", view.min_motivating_reward());
    for reward in [int(6), int(6) - rat(1, 1000)] {
        let report = view.report(&reward);
        let walk: Vec<String> = report.walks[0].iter().map(|&v| g.display_name(v)).collect();
        println!(
            "reward {reward}: motivating = {}, walk {}",
            report.motivating,
            walk.join(" -> ")
        );
    }
}
