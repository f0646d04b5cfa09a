//! Charge every edge leaving a chosen path so the agent cannot stray.

use penalty_planner::agent::AgentView;
use penalty_planner::devices::{fence_required_reward, path_and_fence, Path};
use penalty_planner::instances::{gen_random, RandomSpec};
use penalty_planner::rational::rat;

fn main() {
    let inst = gen_random(&RandomSpec::new(8, 0.5, 7)).unwrap();
    let g = &inst.graph;
    let beta = &inst.beta;

    // Take the longest path by node count.
    let mut best = vec![g.source()];
    let mut stack = vec![vec![g.source()]];
    while let Some(p) = stack.pop() {
        let v = *p.last().unwrap();
        if v == g.target() {
            if p.len() > best.len() {
                best = p;
            }
            continue;
        }
        for &e in g.out_edges(v) {
            let mut q = p.clone();
            q.push(g.edge(e).to);
            stack.push(q);
        }
    }
    let path = Path::new(g, best).unwrap();
    let need = fence_required_reward(g, beta, &path);
    println!("path {} needs reward > {need} (infimum)", path.display(g));

    for eps in [rat(1, 1), rat(1, 100)] {
        let config = path_and_fence(g, beta, &path, &eps).unwrap();
        let view = AgentView::new(g, &config, beta);
        let report = view.report(&(&need + &eps));
        println!(
            "eps {eps}: {} charged edges, motivating at {} = {}, stays on path = {}",
            config.iter().filter(|(_, x)| **x != rat(0, 1)).count(),
            &need + &eps,
            report.motivating,
            report.walks == vec![path.nodes().to_vec()]
        );
    }
}
