//! JSON round trip and Graphviz output.

use penalty_planner::devices::minmax_path_approx;
use penalty_planner::instances::gen_alice;
use penalty_planner::io;
use penalty_planner::rational::{int, Bias};

fn main() {
    let inst = gen_alice(4, &Bias::from_ratio(1, 3), &int(6)).unwrap();
    let approx = minmax_path_approx(&inst.graph, &inst.beta).unwrap();

    let text = io::serialize(&inst, Some(&approx.config));
    let doc = io::parse(&text).unwrap();
    assert_eq!(doc.instance, inst);
    assert_eq!(io::serialize(&doc.instance, doc.config.as_ref()), text);
    println!("{text}");
    print!(
        "{}",
        io::to_dot(&inst.graph, Some(&approx.config), Some(&approx.minmax_path))
    );
}
