//! Scratch probe: root LP timing and capped solves.
use decarb_core::fixtures;
use decarb_core::model::{build_model, Objective};
use decarb_core::solver::{solve_lp, solve_milp, SolveLimits};
use std::time::{Duration, Instant};

fn run(name: &str, instance: &decarb_core::domain::Instance, objective: Objective) {
    let built = build_model(instance, objective).unwrap();
    let t = Instant::now();
    let lp = solve_lp(&built.problem).unwrap();
    println!(
        "{name} {objective}: root LP status {:?} obj {:.4} iters {} in {:?} ({} vars, {} rows)",
        lp.status, lp.objective, lp.iterations, t.elapsed(),
        built.problem.num_vars(), built.problem.num_constraints(),
    );
    let t = Instant::now();
    let sol = solve_milp(
        &built.problem,
        &SolveLimits { node_cap: Some(500), time_cap: Some(Duration::from_secs(60)) },
    )
    .unwrap();
    println!(
        "  MILP: status {:?} obj {:?} bound {:.4} nodes {} in {:?}",
        sol.status, sol.objective, sol.bound, sol.nodes, t.elapsed()
    );
}

fn main() {
    let aff: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.2);
    let mut s1 = fixtures::scenario1();
    s1.aff = aff;
    let mut s2 = fixtures::scenario2();
    s2.aff = aff;
    println!("AFF = {aff}");
    run("scenario1", &s1, Objective::MinEmission);
    run("scenario1", &s1, Objective::MinBudget);
    run("scenario2", &s2, Objective::MinEmission);
    run("scenario2", &s2, Objective::MinBudget);
}
