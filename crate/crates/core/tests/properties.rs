mod common;

use std::collections::BTreeSet;

use common::*;
use num_traits::Zero;
use penalty_planner::agent::{min_motivating_reward, AgentView};
use penalty_planner::config::CostConfiguration;
use penalty_planner::devices::{
    emulate_subgraph, exact_infimum, exact_infimum_with, fence_required_reward, minmax_path_approx,
    path_and_fence, successor_map, Path, SearchOptions, DEFAULT_PATH_BUDGET,
};
use penalty_planner::graph::EdgeId;
use penalty_planner::io;
use penalty_planner::perceived::cheapest_costs;
use penalty_planner::rational::{int, rat, Bias, Rational};
use proptest::prelude::*;
use rand::Rng;

fn config_strategy() -> impl Strategy<Value = (u64, u64)> {
    (any::<u64>(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn distances_match_path_enumeration((gs, cs) in config_strategy()) {
        let inst = random_instance(gs, 9, usize::MAX);
        let g = &inst.graph;
        let config = random_config(g, &mut rng(cs));
        let d = cheapest_costs(g, &config);
        for v in g.nodes() {
            prop_assert_eq!(&d[v.0], &oracle_d(g, &config, v));
        }
    }

    #[test]
    fn view_is_consistent((gs, cs) in config_strategy()) {
        let inst = random_instance(gs, 9, usize::MAX);
        let (g, beta) = (&inst.graph, &inst.beta);
        let config = random_config(g, &mut rng(cs));
        let view = AgentView::new(g, &config, beta);
        for e in g.edge_ids() {
            let to = g.edge(e).to;
            let eta = config.effective_cost(g, e) + beta.value() * view.d(to);
            prop_assert_eq!(view.eta(e), &eta);
        }
        for v in g.nodes().filter(|&v| v != g.target()) {
            let zeta = view.zeta(v).unwrap();
            prop_assert!(&(beta.value() * view.d(v)) <= zeta);
            prop_assert!(zeta <= view.d(v));
            prop_assert!(!view.argmin(v).is_empty());
            for &e in g.out_edges(v) {
                prop_assert_eq!(view.argmin(v).contains(&e), view.eta(e) == zeta);
            }
        }
    }

    #[test]
    fn agent_matches_oracle((gs, cs) in config_strategy(), numer in 0i64..60, denom in 1i64..6) {
        let inst = random_instance(gs, 9, usize::MAX);
        let (g, beta) = (&inst.graph, &inst.beta);
        let config = random_config(g, &mut rng(cs));
        let reward = rat(numer, denom);
        let report = AgentView::new(g, &config, beta).report(&reward);
        let (motivating, visited) = oracle_agent(g, &config, beta, &reward);
        prop_assert_eq!(report.motivating, motivating);
        prop_assert_eq!(report.motivating, report.abandon_nodes.is_empty());
        prop_assert_eq!(&report.visited, &visited);
        prop_assert_eq!(min_motivating_reward(g, &config, beta), oracle_min_reward(g, &config, beta));
    }

    #[test]
    fn walks_follow_argmin_edges((gs, cs) in config_strategy(), numer in 0i64..60) {
        let inst = random_instance(gs, 9, usize::MAX);
        let (g, beta) = (&inst.graph, &inst.beta);
        let config = random_config(g, &mut rng(cs));
        let view = AgentView::new(g, &config, beta);
        let reward = rat(numer, 3);
        let report = view.report(&reward);
        for walk in &report.walks {
            prop_assert_eq!(walk[0], g.source());
            for p in walk.windows(2) {
                let e = g.find_edge(p[0], p[1]).unwrap();
                prop_assert!(view.argmin(p[0]).contains(&e));
                prop_assert!(view.continues_at(p[0], &reward));
            }
            let last = *walk.last().unwrap();
            prop_assert!(last == g.target() || report.abandon_nodes.contains(&last));
        }
    }

    #[test]
    fn threshold_is_exact((gs, cs) in config_strategy(), delta_denom in 1i64..1000) {
        let inst = random_instance(gs, 9, usize::MAX);
        let (g, beta) = (&inst.graph, &inst.beta);
        let config = random_config(g, &mut rng(cs));
        let view = AgentView::new(g, &config, beta);
        let r = view.min_motivating_reward();
        let delta = rat(1, delta_denom);
        prop_assert!(view.report(&r).motivating);
        prop_assert!(view.report(&(&r + &delta)).motivating);
        prop_assert!(view.report(&(&r + int(7))).motivating);
        if r > Rational::zero() {
            prop_assert!(!view.report(&(&r - &delta)).motivating);
        }
        // Routing ignores the reward.
        let reach = view.reachable_by_ties();
        prop_assert_eq!(&view.report(&Rational::zero()).reachable, &reach);
        prop_assert_eq!(&view.report(&(&r * int(3))).reachable, &reach);
    }

    #[test]
    fn unbiased_agent_needs_exactly_the_distance(gs in any::<u64>()) {
        let g = random_instance(gs, 9, usize::MAX).graph;
        let zero = CostConfiguration::zero();
        let one = Bias::from_ratio(1, 1);
        prop_assert_eq!(min_motivating_reward(&g, &zero, &one), oracle_d(&g, &zero, g.source()));
    }

    #[test]
    fn preprocess_is_idempotent(gs in any::<u64>(), keep_seed in any::<u64>()) {
        let g = random_instance(gs, 9, usize::MAX).graph;
        prop_assert!(g.is_preprocessed());
        prop_assert_eq!(&g.preprocess().unwrap(), &g);
        let mut r = rng(keep_seed);
        let kept: BTreeSet<EdgeId> = g.edge_ids().filter(|_| r.gen_bool(0.6)).collect();
        let (sub, _) = g.edge_subgraph(|e| kept.contains(&e));
        if let Ok(once) = sub.preprocess() {
            prop_assert!(once.validate().is_empty());
            prop_assert!(once.is_preprocessed());
            prop_assert_eq!(&once.preprocess().unwrap(), &once);
            let fwd = once.reachable_from_source();
            let bwd = once.reaches_target();
            prop_assert!(once.nodes().all(|v| fwd[v.0] && bwd[v.0]));
        }
    }

    #[test]
    fn infimum_matches_path_enumeration(gs in any::<u64>()) {
        let inst = random_instance(gs, 10, usize::MAX);
        let (g, beta) = (&inst.graph, &inst.beta);
        let oracle = all_paths_from(g, g.source())
            .into_iter()
            .map(|p| fence_required_reward(g, beta, &Path::new(g, p).unwrap()))
            .min()
            .unwrap();
        let serial = exact_infimum(g, beta, DEFAULT_PATH_BUDGET);
        prop_assert!(!serial.exhausted);
        prop_assert_eq!(&serial.value, &oracle);
        prop_assert_eq!(fence_required_reward(g, beta, &serial.witness), oracle);
        let parallel = exact_infimum_with(g, beta, &SearchOptions { path_budget: DEFAULT_PATH_BUDGET, threads: 4 });
        prop_assert_eq!(&parallel.value, &serial.value);
        prop_assert_eq!(&parallel.witness, &serial.witness);
    }

    #[test]
    fn fence_pins_the_agent_to_its_path(gs in any::<u64>(), pick in any::<u64>(), eps_denom in 1i64..100) {
        let inst = random_instance(gs, 9, usize::MAX);
        let (g, beta) = (&inst.graph, &inst.beta);
        let paths = all_paths_from(g, g.source());
        let path = Path::new(g, paths[(pick % paths.len() as u64) as usize].clone()).unwrap();
        let eps = rat(1, eps_denom);
        let fence = path_and_fence(g, beta, &path, &eps).unwrap();
        let on_path: BTreeSet<EdgeId> = path.edges(g).into_iter().collect();
        for (e, extra) in fence.iter() {
            prop_assert!(!on_path.contains(&e) || extra.is_zero());
            prop_assert!(path.contains(g.edge(e).from));
        }
        let need = fence_required_reward(g, beta, &path);
        let report = AgentView::new(g, &fence, beta).report(&(&need + &eps));
        prop_assert!(report.motivating);
        prop_assert_eq!(&report.walks, &vec![path.nodes().to_vec()]);
        prop_assert!(min_motivating_reward(g, &fence, beta) >= need);
    }

    #[test]
    fn approximation_invariants(gs in any::<u64>()) {
        let inst = random_instance(gs, 10, usize::MAX);
        let (g, beta) = (&inst.graph, &inst.beta);
        let approx = minmax_path_approx(g, beta).unwrap();
        let zero = CostConfiguration::zero();
        prop_assert!(AgentView::new(g, &approx.config, beta).report(&approx.guaranteed_reward).motivating);
        let exact = exact_infimum(g, beta, DEFAULT_PATH_BUDGET);
        prop_assert!(approx.lower_bound <= exact.value);
        let sigma = successor_map(g);
        let d0 = cheapest_costs(g, &zero);
        for v in g.nodes().filter(|&v| v != g.target()) {
            let p = sigma.path_from(v);
            prop_assert_eq!(*p.last().unwrap(), g.target());
            prop_assert_eq!(path_cost(g, &zero, &p), d0[v.0].clone());
        }
    }

    #[test]
    fn emulation_matches_deletion(gs in any::<u64>(), keep_seed in any::<u64>(), numer in 0i64..40) {
        let inst = random_instance(gs, 9, usize::MAX);
        let (g, beta) = (&inst.graph, &inst.beta);
        let mut r = rng(keep_seed);
        let kept: BTreeSet<EdgeId> = g.edge_ids().filter(|_| r.gen_bool(0.7)).collect();
        let (sub, _) = g.edge_subgraph(|e| kept.contains(&e));
        let Ok(pre) = sub.preprocess_mapped() else { return Ok(()); };
        let reward = rat(numer, 4);
        let zero = CostConfiguration::zero();
        let deleted = AgentView::new(&pre.graph, &zero, beta).report(&reward);
        let config = emulate_subgraph(g, &kept, &reward).unwrap();
        let emulated = AgentView::new(g, &config, beta).report(&reward);
        prop_assert_eq!(deleted.motivating, emulated.motivating);
        let mapped: BTreeSet<_> = deleted.visited.iter().map(|v| pre.node_origin[v.0]).collect();
        prop_assert_eq!(mapped, emulated.visited);
    }

    #[test]
    fn json_round_trip((gs, cs) in config_strategy(), with_reward in any::<bool>()) {
        let mut inst = random_instance(gs, 10, usize::MAX);
        let mut r = rng(cs);
        if with_reward {
            inst = inst.with_reward(rat(r.gen_range(0..30), r.gen_range(1..9)));
        }
        let config = random_config(&inst.graph, &mut r);
        let text = io::serialize(&inst, Some(&config));
        let doc = io::parse(&text).unwrap();
        prop_assert_eq!(&doc.instance, &inst);
        let back = doc.config.unwrap();
        for e in inst.graph.edge_ids() {
            prop_assert_eq!(back.get(e), config.get(e));
        }
        prop_assert_eq!(io::serialize(&doc.instance, Some(&back)), text);
    }
}
