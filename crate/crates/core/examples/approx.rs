//! Cheap configuration within a factor two of the best reward.

use penalty_planner::agent::is_motivating;
use penalty_planner::devices::{exact_infimum, minmax_path_approx, DEFAULT_PATH_BUDGET};
use penalty_planner::instances::{gen_random, RandomSpec};

fn main() {
    for seed in 0..5 {
        let inst = gen_random(&RandomSpec::new(11, 0.4, seed)).unwrap();
        let (g, beta) = (&inst.graph, &inst.beta);
        let approx = minmax_path_approx(g, beta).unwrap();
        let exact = exact_infimum(g, beta, DEFAULT_PATH_BUDGET);
        let ok = is_motivating(g, &approx.config, beta, &approx.guaranteed_reward).motivating;
        println!(
            "seed {seed}: rho {}, approx reward {} (verified {ok}), infimum {}, ratio {}",
            approx.rho,
            approx.guaranteed_reward,
            exact.value,
            &approx.guaranteed_reward / &exact.value
        );
    }
}
