//! Brute-force LP oracle shared by the solver equivalence suites.
//!
//! The oracle never touches the simplex: it enumerates basic points (all
//! ways of activating `n` constraints out of the rows and finite bounds),
//! keeps the feasible ones, and takes the best objective. Unboundedness is
//! decided by enumerating the normalised recession cone the same way. With
//! every variable bounded below, the feasible region is pointed, so "no
//! feasible basic point" is equivalent to "infeasible" and a finite optimum
//! is always attained at one of the enumerated points.

use decarb_core::milp::{MilpProblem, ProblemBuilder, Relation};

#[derive(Debug, Clone)]
pub struct OracleLp {
    pub objective: Vec<f64>,
    /// Dense rows.
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleStatus {
    Optimal(f64),
    Infeasible,
    Unbounded,
}

pub const ORACLE_FEAS_TOL: f64 = 1e-6;

impl OracleLp {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn to_problem(&self) -> MilpProblem {
        let mut b = ProblemBuilder::new();
        for j in 0..self.num_vars() {
            b.add_var(format!("x{j}"), self.lower[j], self.upper[j], false, self.objective[j]);
        }
        for (i, (coeffs, rel, rhs)) in self.rows.iter().enumerate() {
            let sparse: Vec<(usize, f64)> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0.0)
                .map(|(j, &a)| (j, a))
                .collect();
            b.add_row(format!("r{i}"), sparse, *rel, *rhs);
        }
        b.finish()
    }

    fn is_feasible(&self, x: &[f64]) -> bool {
        for j in 0..self.num_vars() {
            if x[j] < self.lower[j] - ORACLE_FEAS_TOL || x[j] > self.upper[j] + ORACLE_FEAS_TOL {
                return false;
            }
        }
        for (coeffs, rel, rhs) in &self.rows {
            let lhs: f64 = coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let ok = match rel {
                Relation::Le => lhs <= rhs + ORACLE_FEAS_TOL,
                Relation::Ge => lhs >= rhs - ORACLE_FEAS_TOL,
                Relation::Eq => (lhs - rhs).abs() <= ORACLE_FEAS_TOL,
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let mut best = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[best][col].abs() {
                best = r;
            }
        }
        if a[best][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, best);
        b.swap(col, best);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            if factor != 0.0 {
                for c in col..n {
                    a[r][c] -= factor * a[col][c];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut sum = b[r];
        for c in r + 1..n {
            sum -= a[r][c] * x[c];
        }
        x[r] = sum / a[r][r];
    }
    Some(x)
}

/// Number of basic points the enumeration would visit.
pub fn enumeration_size(lp: &OracleLp) -> u128 {
    let mut candidates = lp.rows.len();
    for j in 0..lp.num_vars() {
        if lp.lower[j].is_finite() {
            candidates += 1;
        }
        if lp.upper[j].is_finite() {
            candidates += 1;
        }
    }
    binomial(candidates, lp.num_vars())
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut result: u128 = 1;
    for i in 0..k.min(n - k) {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// Visit every k-combination of `0..n`.
fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // Advance.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact reference solve by basic-point enumeration.
pub fn oracle_solve(lp: &OracleLp) -> OracleStatus {
    let n = lp.num_vars();
    if n == 0 {
        return OracleStatus::Optimal(0.0);
    }

    // Candidate hyperplanes: every row as an equality plus each finite bound.
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for (coeffs, _, rhs) in &lp.rows {
        planes.push((coeffs.clone(), *rhs));
    }
    for j in 0..n {
        if lp.lower[j].is_finite() {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            planes.push((e, lp.lower[j]));
        }
        if lp.upper[j].is_finite() {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            planes.push((e, lp.upper[j]));
        }
    }

    let mut best: Option<f64> = None;
    for_each_combination(planes.len(), n, |combo| {
        let a: Vec<Vec<f64>> = combo.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = combo.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_square(a, b) {
            if lp.is_feasible(&x) {
                let obj: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
    });

    let Some(best) = best else {
        return OracleStatus::Infeasible;
    };

    // Recession check over the variables with no upper bound (every lower
    // bound is finite by construction of the generators, so directions are
    // componentwise non-negative).
    let unbounded_vars: Vec<usize> = (0..n).filter(|&j| lp.upper[j].is_infinite()).collect();
    if !unbounded_vars.is_empty() {
        let dim = unbounded_vars.len();
        let mut rows: Vec<(Vec<f64>, Relation, f64)> = lp
            .rows
            .iter()
            .map(|(coeffs, rel, _)| {
                let projected: Vec<f64> = unbounded_vars.iter().map(|&j| coeffs[j]).collect();
                (projected, *rel, 0.0)
            })
            .collect();
        rows.push((vec![1.0; dim], Relation::Eq, 1.0));
        let cone = OracleLp {
            objective: unbounded_vars.iter().map(|&j| lp.objective[j]).collect(),
            rows,
            lower: vec![0.0; dim],
            upper: vec![1.0; dim],
        };
        if let OracleStatus::Optimal(direction_cost) = oracle_solve(&cone) {
            if direction_cost < -1e-7 {
                return OracleStatus::Unbounded;
            }
        }
    }

    OracleStatus::Optimal(best)
}
