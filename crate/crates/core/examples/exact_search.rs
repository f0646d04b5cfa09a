//! Branch-and-bound over paths for the least reward any configuration
//! can approach.

use std::time::Instant;

use penalty_planner::devices::{exact_infimum_with, SearchOptions};
use penalty_planner::instances::{gen_random, RandomSpec};

fn main() {
    let inst = gen_random(&RandomSpec::new(22, 0.6, 11)).unwrap();
    let (g, beta) = (&inst.graph, &inst.beta);
    println!(
        "{} nodes, {} edges, {} s-t paths",
        g.node_count(),
        g.edge_count(),
        g.count_paths()
    );
    for threads in [1, 4] {
        let start = Instant::now();
        let options = SearchOptions {
            threads,
            ..SearchOptions::default()
        };
        let result = exact_infimum_with(g, beta, &options);
        println!(
            "threads {threads}: infimum {} via {} ({} paths evaluated, exhausted {}) in {:?}",
            result.value,
            result.witness.display(g),
            result.paths_evaluated,
            result.exhausted,
            start.elapsed()
        );
    }
}
