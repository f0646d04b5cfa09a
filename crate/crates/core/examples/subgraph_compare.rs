//! Deleting edges against charging for them.

use penalty_planner::devices::compare_devices;
use penalty_planner::instances::{gen_noopt, gen_random, RandomSpec};
use penalty_planner::rational::Bias;

fn main() {
    let mut instances = vec![(
        "noopt".to_string(),
        gen_noopt(&Bias::from_ratio(1, 2)).unwrap(),
    )];
    for seed in 0..4 {
        instances.push((
            format!("random {seed}"),
            gen_random(&RandomSpec::new(7, 0.5, seed)).unwrap(),
        ));
    }
    for (name, inst) in instances {
        let c = compare_devices(&inst.graph, &inst.beta, 20).unwrap();
        println!(
            "{name}: penalty {}, prohibition {}, ratio {}, bound {}",
            c.penalty.value,
            c.prohibition.reward,
            c.ratio.map(|r| r.to_string()).unwrap_or_else(|| "-".into()),
            c.ratio_bound
        );
    }
}
