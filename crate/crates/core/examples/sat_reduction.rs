//! A 3-CNF formula becomes a task graph that is motivating at 1/β exactly
//! when the formula is satisfiable.

use penalty_planner::agent::min_motivating_reward;
use penalty_planner::devices::{exact_infimum, DEFAULT_PATH_BUDGET};
use penalty_planner::rational::Bias;
use penalty_planner::reductions::{
    assignment_to_config, config_to_assignment, parse_dimacs, sat_to_mcc,
};

const CNF: &str = "c (-x1 | x2 | x3) & (x1 | -x2 | -x3) & (x1 | -x2 | x3)
p cnf 3 3
-1 2 3 0
1 -2 -3 0
1 -2 3 0
";

fn main() {
    let formula = parse_dimacs(CNF).unwrap();
    let beta = Bias::from_ratio(1, 5);
    let meta = sat_to_mcc(&formula, &beta, None, false).unwrap();
    println!(
        "{} nodes, {} edges, epsilon {}",
        meta.graph.node_count(),
        meta.graph.edge_count(),
        meta.epsilon
    );
    for tau in formula.satisfying_assignments() {
        let config = assignment_to_config(&meta, &tau).unwrap();
        let r = min_motivating_reward(&meta.graph, &config, &beta);
        let back = config_to_assignment(&meta, &config).unwrap();
        println!("{tau}: least reward {r}, read back {back}");
    }
    let exact = exact_infimum(&meta.graph, &beta, DEFAULT_PATH_BUDGET);
    println!("infimum {} (1/beta = {})", exact.value, meta.reward);

    let unsat = parse_dimacs("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n").unwrap();
    let meta = sat_to_mcc(&unsat, &beta, None, true).unwrap();
    let exact = exact_infimum(&meta.graph, &beta, DEFAULT_PATH_BUDGET);
    println!(
        "unsatisfiable, gap variant: infimum {} > {}",
        exact.value,
        meta.simulation_reward()
    );
}
