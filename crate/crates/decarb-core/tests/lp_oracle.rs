//! Simplex vs brute-force oracle on randomly generated small LPs.
//!
//! Status (optimal / infeasible / unbounded) must match exactly and optimal
//! objectives must agree within 1e-6 over hundreds of seeded instances.

mod common;

use common::{enumeration_size, oracle_solve, OracleLp, OracleStatus};
use decarb_core::milp::Relation;
use decarb_core::solver::{solve_lp, LpStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_relation(rng: &mut ChaCha8Rng) -> Relation {
    match rng.gen_range(0..6) {
        0 | 1 | 2 => Relation::Le,
        3 | 4 => Relation::Ge,
        _ => Relation::Eq,
    }
}

fn random_lp(rng: &mut ChaCha8Rng) -> OracleLp {
    loop {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(0..=8usize);
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for _ in 0..n {
            let lo = rng.gen_range(-9..=0) as f64;
            let hi = if rng.gen_bool(0.25) {
                f64::INFINITY
            } else {
                lo + rng.gen_range(0..=12) as f64
            };
            lower.push(lo);
            upper.push(hi);
        }
        let objective: Vec<f64> = (0..n).map(|_| rng.gen_range(-9..=9) as f64).collect();
        let rows: Vec<(Vec<f64>, Relation, f64)> = (0..m)
            .map(|_| {
                let coeffs: Vec<f64> = (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.35) {
                            0.0
                        } else {
                            rng.gen_range(-9..=9) as f64
                        }
                    })
                    .collect();
                (coeffs, random_relation(rng), rng.gen_range(-12..=12) as f64)
            })
            .collect();
        let lp = OracleLp { objective, rows, lower, upper };
        if enumeration_size(&lp) <= 25_000 {
            return lp;
        }
    }
}

#[test]
fn simplex_matches_vertex_enumeration_on_500_random_lps() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1);
    let mut optimal = 0usize;
    let mut infeasible = 0usize;
    let mut unbounded = 0usize;

    for case in 0..520 {
        let lp = random_lp(&mut rng);
        let expected = oracle_solve(&lp);
        let got = solve_lp(&lp.to_problem()).unwrap_or_else(|e| panic!("case {case}: {e}\n{lp:?}"));
        match expected {
            OracleStatus::Optimal(obj) => {
                optimal += 1;
                assert_eq!(got.status, LpStatus::Optimal, "case {case}: oracle optimal {obj}\n{lp:?}");
                assert!(
                    (got.objective - obj).abs() <= 1e-6,
                    "case {case}: simplex {} vs oracle {obj}\n{lp:?}",
                    got.objective
                );
            }
            OracleStatus::Infeasible => {
                infeasible += 1;
                assert_eq!(got.status, LpStatus::Infeasible, "case {case}\n{lp:?}");
            }
            OracleStatus::Unbounded => {
                unbounded += 1;
                assert_eq!(got.status, LpStatus::Unbounded, "case {case}\n{lp:?}");
            }
        }
    }

    println!("lp oracle agreement: {optimal} optimal, {infeasible} infeasible, {unbounded} unbounded");
    assert!(optimal >= 100, "suite should exercise plenty of optimal LPs");
    assert!(infeasible >= 50, "suite should exercise infeasible LPs");
    assert!(unbounded >= 10, "suite should exercise unbounded LPs");
}

#[test]
fn textbook_polytope_agrees_with_oracle() {
    // min -x - y s.t. x + 2y <= 4 over [0,3]x[0,3]; the frozen value -3.5
    // in the solver unit tests came from this enumeration.
    let lp = OracleLp {
        objective: vec![-1.0, -1.0],
        rows: vec![(vec![1.0, 2.0], Relation::Le, 4.0)],
        lower: vec![0.0, 0.0],
        upper: vec![3.0, 3.0],
    };
    assert_eq!(oracle_solve(&lp), OracleStatus::Optimal(-3.5));
    let sol = solve_lp(&lp.to_problem()).unwrap();
    assert!((sol.objective - -3.5).abs() < 1e-9);
}

#[test]
fn degenerate_overdetermined_corner_terminates() {
    // Many redundant constraints through one point force degenerate pivots;
    // the stall detector must still terminate at the optimum.
    let n = 4;
    let mut rows = Vec::new();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        rows.push((e, Relation::Ge, 0.0));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let mut e = vec![0.0; n];
            e[a] = 1.0;
            e[b] = 1.0;
            rows.push((e, Relation::Ge, 0.0));
        }
    }
    rows.push((vec![1.0; n], Relation::Le, 2.0));
    let lp = OracleLp {
        objective: vec![-1.0, -1.0, -1.0, -1.0],
        rows,
        lower: vec![0.0; n],
        upper: vec![f64::INFINITY; n],
    };
    let sol = solve_lp(&lp.to_problem()).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective - -2.0).abs() < 1e-9);
}
