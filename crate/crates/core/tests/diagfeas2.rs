//! Temporary diagnostic for mid-size instance feasibility.

use darp_core::construction::construct_greedy;
use darp_core::instgen::{generate, GenParams};
use darp_core::neighborhood::evaluate_solution;
use darp_core::schedule::{EvaluationLevel, RouteEvaluator};
use darp_core::tabu::{search, ClockMode, SearchConfig, Variant};

#[test]
fn diagnose_mid() {
    for (n, m, seed) in [(48usize, 5usize, 102u64), (72, 7, 103)] {
        let inst = generate("mid", n, m, seed, &GenParams::default());
        let sol = construct_greedy(&inst, 1);
        let mut ev = RouteEvaluator::new(&inst);
        let cache = evaluate_solution(&mut ev, &sol, EvaluationLevel::Level3);
        println!("n={n} m={m} greedy viol: {:?}", cache.total_violations());
        for (k, route) in sol.routes.iter().enumerate() {
            let e = ev.evaluate(&route.vertex_sequence, EvaluationLevel::Level3);
            if !e.violations.is_feasible(1e-9) {
                println!(
                    "  route {k}: len {} dur {:.0} viol {:?}",
                    route.len(),
                    e.duration,
                    e.violations
                );
            }
        }
        for budget_s in [60u64] {
            let mut config = SearchConfig::new(Variant::Its, budget_s * 1000, 1);
            config.clock = ClockMode::work();
            let out = search(&inst, &config).unwrap();
            println!(
                "  ITS {budget_s}s: first {:?} iters {}",
                out.trace.first_feasible, out.iterations
            );
        }
    }
}
