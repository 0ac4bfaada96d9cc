//! Branch-and-bound on the integer variables of a [`MilpProblem`].
//!
//! The search follows fixed, reproducible rules: the LP relaxation is solved
//! at the root, nodes are selected best-bound-first (ties broken by lowest
//! node id), branching picks the most fractional integer variable (ties by
//! lowest variable index), and nodes are pruned against the incumbent with
//! an absolute/relative gap of 1e-6. Identical problems therefore produce
//! identical incumbents and node counts.
//!
//! The only presolve is fixed-variable elimination: variables whose bounds
//! pin them to a single value are substituted into the rows before the
//! search starts.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::milp::{Constraint, MilpProblem};
use crate::solver::lp::{BasisSnapshot, LpStatus, Simplex, FEASIBILITY_TOL};
use crate::solver::SolverError;

/// Binaries further than this from an integer are branching candidates.
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// Absolute / relative optimality gap at which a node cannot improve the
/// incumbent.
fn gap_tolerance(incumbent: f64) -> f64 {
    f64::max(1e-6, 1e-6 * incumbent.abs())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveLimits {
    /// Maximum branch-and-bound nodes to evaluate.
    pub node_cap: Option<u64>,
    /// Wall-clock cap. Solves that hit it are not reproducible run-to-run.
    pub time_cap: Option<Duration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpStatus {
    /// Incumbent proven optimal within the gap tolerance.
    Optimal,
    Infeasible,
    Unbounded,
    /// A cap was hit before the tree was exhausted; the best incumbent (if
    /// any) and the proven bound are reported.
    LimitExceeded,
}

#[derive(Debug, Clone)]
pub struct MilpSolution {
    pub status: MilpStatus,
    /// Incumbent variable assignment, when one was found.
    pub values: Option<Vec<f64>>,
    /// Incumbent objective, when one was found.
    pub objective: Option<f64>,
    /// Proven lower bound on the optimum (minimisation).
    pub bound: f64,
    /// Nodes evaluated (LP relaxations solved).
    pub nodes: u64,
    /// Relative gap `(objective - bound) / max(1, |objective|)`.
    pub gap: Option<f64>,
}

struct Node {
    bound: f64,
    id: u64,
    /// `(reduced var index, value)` fixings accumulated from the root.
    fixings: Vec<(usize, f64)>,
    basis: Option<BasisSnapshot>,
}

/// Heap entry ordered so the smallest (bound, id) pops first.
struct Entry(Node);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want best (lowest) bound.
        other
            .0
            .bound
            .total_cmp(&self.0.bound)
            .then_with(|| other.0.id.cmp(&self.0.id))
    }
}

/// Result of substituting fixed variables out of the problem.
struct Reduction {
    reduced: MilpProblem,
    /// Original index of each kept variable.
    keep: Vec<usize>,
    /// Full-length template holding the fixed values (zero for kept vars).
    template: Vec<f64>,
    objective_offset: f64,
    /// Set when an empty row contradicts its constant left-hand side.
    infeasible: bool,
}

fn eliminate_fixed(problem: &MilpProblem) -> Reduction {
    let n = problem.num_vars();
    let mut keep = Vec::new();
    let mut new_index = vec![usize::MAX; n];
    let mut template = vec![0.0; n];
    let mut offset = 0.0;
    for j in 0..n {
        if problem.is_fixed(j) {
            template[j] = problem.lower[j];
            offset += problem.objective[j] * problem.lower[j];
        } else {
            new_index[j] = keep.len();
            keep.push(j);
        }
    }

    let mut reduced = MilpProblem {
        objective: keep.iter().map(|&j| problem.objective[j]).collect(),
        constraints: Vec::with_capacity(problem.constraints.len()),
        lower: keep.iter().map(|&j| problem.lower[j]).collect(),
        upper: keep.iter().map(|&j| problem.upper[j]).collect(),
        integer: keep.iter().map(|&j| problem.integer[j]).collect(),
        var_names: keep.iter().map(|&j| problem.var_names[j].clone()).collect(),
    };

    let mut infeasible = false;
    for row in &problem.constraints {
        let mut constant = 0.0;
        let mut coeffs = Vec::with_capacity(row.coeffs.len());
        for &(j, a) in &row.coeffs {
            if new_index[j] == usize::MAX {
                constant += a * template[j];
            } else {
                coeffs.push((new_index[j], a));
            }
        }
        let rhs = row.rhs - constant;
        if coeffs.is_empty() {
            let violated = match row.relation {
                crate::milp::Relation::Le => rhs < -FEASIBILITY_TOL,
                crate::milp::Relation::Ge => rhs > FEASIBILITY_TOL,
                crate::milp::Relation::Eq => rhs.abs() > FEASIBILITY_TOL,
            };
            if violated {
                infeasible = true;
            }
            continue;
        }
        reduced.constraints.push(Constraint {
            name: row.name.clone(),
            coeffs,
            relation: row.relation,
            rhs,
        });
    }

    Reduction { reduced, keep, template, objective_offset: offset, infeasible }
}

/// Index of the most fractional integer variable, if any.
fn most_fractional(problem: &MilpProblem, values: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (j, (&is_int, &v)) in problem.integer.iter().zip(values).enumerate() {
        if !is_int {
            continue;
        }
        let frac = (v - v.round()).abs();
        if frac <= INTEGRALITY_TOL {
            continue;
        }
        match best {
            Some((_, f)) if f >= frac => {}
            _ => best = Some((j, v)),
        }
    }
    best
}

/// Solves `problem` to proven global optimality (or proven infeasibility)
/// by LP-relaxation branch-and-bound, within the given limits.
pub fn solve_milp(problem: &MilpProblem, limits: &SolveLimits) -> Result<MilpSolution, SolverError> {
    problem.validate()?;
    let started = Instant::now();

    let reduction = eliminate_fixed(problem);
    if reduction.infeasible {
        return Ok(MilpSolution {
            status: MilpStatus::Infeasible,
            values: None,
            objective: None,
            bound: f64::INFINITY,
            nodes: 1,
            gap: None,
        });
    }
    if reduction.reduced.num_vars() == 0 {
        let objective = reduction.objective_offset;
        return Ok(MilpSolution {
            status: MilpStatus::Optimal,
            values: Some(reduction.template.clone()),
            objective: Some(objective),
            bound: objective,
            nodes: 1,
            gap: Some(0.0),
        });
    }

    let reduced = &reduction.reduced;
    let mut simplex = Simplex::new(reduced);

    let mut heap = BinaryHeap::new();
    heap.push(Entry(Node {
        bound: f64::NEG_INFINITY,
        id: 0,
        fixings: Vec::new(),
        basis: None,
    }));
    let mut next_id: u64 = 1;
    let mut nodes: u64 = 0;
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut proven_bound = f64::NEG_INFINITY;

    while let Some(Entry(node)) = heap.pop() {
        let inc_obj = incumbent.as_ref().map(|(o, _)| *o).unwrap_or(f64::INFINITY);
        if node.bound >= inc_obj - gap_tolerance(inc_obj) {
            // Best-bound order: every remaining node is at least as bad.
            proven_bound = node.bound;
            break;
        }
        let capped = limits.node_cap.is_some_and(|cap| nodes >= cap)
            || limits.time_cap.is_some_and(|cap| started.elapsed() >= cap);
        if capped {
            let (objective, values) = match incumbent {
                Some((obj, vals)) => (Some(obj), Some(inflate(&reduction, &vals))),
                None => (None, None),
            };
            let bound = node.bound.max(f64::NEG_INFINITY);
            return Ok(MilpSolution {
                status: MilpStatus::LimitExceeded,
                gap: objective.map(|o| (o - bound) / f64::max(1.0, o.abs())),
                values,
                objective,
                bound,
                nodes,
            });
        }

        nodes += 1;
        simplex.reset_bounds();
        for &(var, value) in &node.fixings {
            simplex.set_var_bounds(var, value, value);
        }
        let warm = node.basis.as_ref();
        if simplex.init(warm).is_err() {
            simplex.init(None)?;
        }
        let lp = simplex.run()?;

        match lp.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                return Ok(MilpSolution {
                    status: MilpStatus::Unbounded,
                    values: None,
                    objective: None,
                    bound: f64::NEG_INFINITY,
                    nodes,
                    gap: None,
                });
            }
            LpStatus::Optimal => {}
        }
        let node_obj = lp.objective + reduction.objective_offset;
        if node_obj >= inc_obj - gap_tolerance(inc_obj) {
            continue; // cannot beat the incumbent
        }

        match most_fractional(reduced, &lp.values) {
            None => {
                if node_obj < inc_obj {
                    incumbent = Some((node_obj, lp.values));
                }
            }
            Some((var, value)) => {
                let mut down = node.fixings.clone();
                down.push((var, value.floor()));
                let mut up = node.fixings;
                up.push((var, value.ceil()));
                heap.push(Entry(Node {
                    bound: node_obj,
                    id: next_id,
                    fixings: down,
                    basis: Some(lp.basis.clone()),
                }));
                heap.push(Entry(Node {
                    bound: node_obj,
                    id: next_id + 1,
                    fixings: up,
                    basis: Some(lp.basis),
                }));
                next_id += 2;
            }
        }
    }

    match incumbent {
        Some((objective, values)) => {
            let bound = if proven_bound.is_finite() {
                proven_bound.min(objective)
            } else {
                objective
            };
            Ok(MilpSolution {
                status: MilpStatus::Optimal,
                values: Some(inflate(&reduction, &values)),
                objective: Some(objective),
                bound,
                nodes,
                gap: Some((objective - bound) / f64::max(1.0, objective.abs())),
            })
        }
        None => Ok(MilpSolution {
            status: MilpStatus::Infeasible,
            values: None,
            objective: None,
            bound: f64::INFINITY,
            nodes,
            gap: None,
        }),
    }
}

/// Expand a reduced-space assignment back to the original variable order.
fn inflate(reduction: &Reduction, reduced_values: &[f64]) -> Vec<f64> {
    let mut full = reduction.template.clone();
    for (r, &orig) in reduction.keep.iter().enumerate() {
        full[orig] = reduced_values[r];
    }
    full
}
