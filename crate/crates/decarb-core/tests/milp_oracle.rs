//! Branch-and-bound vs exhaustive binary enumeration.
//!
//! Every random MILP is solved twice: by the branch-and-bound solver and by
//! walking all 2^b binary assignments, reducing each to a small LP that the
//! brute-force vertex oracle solves (so the reference path never touches
//! the simplex). Statuses must match and optima agree within 1e-6.

mod common;

use common::{oracle_solve, OracleLp, OracleStatus, ORACLE_FEAS_TOL};
use decarb_core::milp::{MilpProblem, ProblemBuilder, Relation};
use decarb_core::solver::{solve_milp, MilpStatus, SolveLimits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct RandomMilp {
    problem: MilpProblem,
    num_binaries: usize,
    num_continuous: usize,
    rows: Vec<(Vec<f64>, Relation, f64)>,
    cont_lower: Vec<f64>,
    cont_upper: Vec<f64>,
}

fn random_relation(rng: &mut ChaCha8Rng) -> Relation {
    match rng.gen_range(0..6) {
        0 | 1 | 2 => Relation::Le,
        3 | 4 => Relation::Ge,
        _ => Relation::Eq,
    }
}

/// Binaries first, continuous variables after them.
fn random_milp(rng: &mut ChaCha8Rng) -> RandomMilp {
    let mut num_binaries = rng.gen_range(1..=12);
    if num_binaries > 8 && rng.gen_bool(0.6) {
        num_binaries = rng.gen_range(1..=8);
    }
    let (num_continuous, m) = if num_binaries > 10 {
        (rng.gen_range(0..=2), rng.gen_range(0..=3))
    } else {
        (rng.gen_range(0..=4), rng.gen_range(0..=6))
    };
    let n = num_binaries + num_continuous;

    let mut b = ProblemBuilder::new();
    let mut cont_lower = Vec::new();
    let mut cont_upper = Vec::new();
    for j in 0..num_binaries {
        b.add_var(format!("b{j}"), 0.0, 1.0, true, rng.gen_range(-9..=9) as f64);
    }
    for j in 0..num_continuous {
        let lo = rng.gen_range(-5..=0) as f64;
        let hi = lo + rng.gen_range(0..=10) as f64;
        cont_lower.push(lo);
        cont_upper.push(hi);
        b.add_var(format!("x{j}"), lo, hi, false, rng.gen_range(-9..=9) as f64);
    }
    let rows: Vec<(Vec<f64>, Relation, f64)> = (0..m)
        .map(|_| {
            let coeffs: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        0.0
                    } else {
                        rng.gen_range(-9..=9) as f64
                    }
                })
                .collect();
            (coeffs, random_relation(rng), rng.gen_range(-15..=15) as f64)
        })
        .collect();
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        let sparse: Vec<(usize, f64)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0.0)
            .map(|(j, &a)| (j, a))
            .collect();
        b.add_row(format!("r{i}"), sparse, *rel, *rhs);
    }
    RandomMilp {
        problem: b.finish(),
        num_binaries,
        num_continuous,
        rows,
        cont_lower,
        cont_upper,
    }
}

/// Exhaustive reference: try every binary assignment, solve the continuous
/// remainder with the vertex-enumeration oracle.
fn enumerate_optimum(milp: &RandomMilp) -> Option<f64> {
    let nb = milp.num_binaries;
    let nc = milp.num_continuous;
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << nb) {
        let assignment: Vec<f64> = (0..nb).map(|j| ((mask >> j) & 1) as f64).collect();
        let fixed_cost: f64 = assignment
            .iter()
            .enumerate()
            .map(|(j, v)| milp.problem.objective[j] * v)
            .sum();

        // Reduce each row by the binary contribution.
        let mut ok = true;
        let mut reduced_rows = Vec::with_capacity(milp.rows.len());
        for (coeffs, rel, rhs) in &milp.rows {
            let contribution: f64 = coeffs[..nb].iter().zip(&assignment).map(|(a, v)| a * v).sum();
            let reduced_rhs = rhs - contribution;
            let cont_coeffs: Vec<f64> = coeffs[nb..].to_vec();
            if cont_coeffs.iter().all(|&a| a == 0.0) {
                let satisfied = match rel {
                    Relation::Le => reduced_rhs >= -ORACLE_FEAS_TOL,
                    Relation::Ge => reduced_rhs <= ORACLE_FEAS_TOL,
                    Relation::Eq => reduced_rhs.abs() <= ORACLE_FEAS_TOL,
                };
                if !satisfied {
                    ok = false;
                    break;
                }
            } else {
                reduced_rows.push((cont_coeffs, *rel, reduced_rhs));
            }
        }
        if !ok {
            continue;
        }

        let candidate = if nc == 0 {
            Some(fixed_cost)
        } else {
            let lp = OracleLp {
                objective: milp.problem.objective[nb..].to_vec(),
                rows: reduced_rows,
                lower: milp.cont_lower.clone(),
                upper: milp.cont_upper.clone(),
            };
            match oracle_solve(&lp) {
                OracleStatus::Optimal(v) => Some(fixed_cost + v),
                OracleStatus::Infeasible => None,
                OracleStatus::Unbounded => unreachable!("all continuous bounds are finite"),
            }
        };
        if let Some(v) = candidate {
            best = Some(best.map_or(v, |b: f64| b.min(v)));
        }
    }
    best
}

#[test]
fn branch_and_bound_matches_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_2);
    let mut optimal = 0usize;
    let mut infeasible = 0usize;

    for case in 0..220 {
        let milp = random_milp(&mut rng);
        let expected = enumerate_optimum(&milp);
        let got = solve_milp(&milp.problem, &SolveLimits::default())
            .unwrap_or_else(|e| panic!("case {case}: {e}"));

        match expected {
            Some(obj) => {
                optimal += 1;
                assert_eq!(
                    got.status,
                    MilpStatus::Optimal,
                    "case {case}: enumeration found {obj}, solver says {:?}",
                    got.status
                );
                let solver_obj = got.objective.unwrap();
                assert!(
                    (solver_obj - obj).abs() <= 1e-6,
                    "case {case}: solver {solver_obj} vs enumeration {obj}"
                );
                // The incumbent itself must be integral and feasible.
                let values = got.values.as_ref().unwrap();
                for j in 0..milp.num_binaries {
                    let v = values[j];
                    assert!((v - v.round()).abs() <= 1e-6, "case {case}: binary {j} = {v}");
                }
                for (coeffs, rel, rhs) in &milp.rows {
                    let lhs: f64 = coeffs.iter().zip(values).map(|(a, v)| a * v).sum();
                    let ok = match rel {
                        Relation::Le => lhs <= rhs + 1e-6,
                        Relation::Ge => lhs >= rhs - 1e-6,
                        Relation::Eq => (lhs - rhs).abs() <= 1e-6,
                    };
                    assert!(ok, "case {case}: incumbent violates a row");
                }
                // Proven bound within the advertised gap.
                let gap = f64::max(1e-6, 1e-6 * solver_obj.abs());
                assert!(
                    solver_obj - got.bound <= gap + 1e-9,
                    "case {case}: bound {} vs objective {solver_obj}",
                    got.bound
                );
            }
            None => {
                infeasible += 1;
                assert_eq!(got.status, MilpStatus::Infeasible, "case {case}");
            }
        }
    }

    println!("milp oracle agreement: {optimal} optimal, {infeasible} infeasible");
    assert!(optimal >= 80);
    assert!(infeasible >= 20);
}

#[test]
fn deterministic_node_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_3);
    for _ in 0..20 {
        let milp = random_milp(&mut rng);
        let a = solve_milp(&milp.problem, &SolveLimits::default()).unwrap();
        let b = solve_milp(&milp.problem, &SolveLimits::default()).unwrap();
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.status, b.status);
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.values, b.values);
    }
}
