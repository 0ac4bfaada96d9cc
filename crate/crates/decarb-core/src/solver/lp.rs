//! Bounded-variable two-phase revised simplex.
//!
//! Rows are turned into equalities by adding one logical variable per row
//! whose bounds encode the relation (`<=`: `[0, inf)`, `>=`: `(-inf, 0]`,
//! `=`: `[0, 0]`). The basis inverse is kept dense and updated in product
//! form on every pivot, with a full refactorisation every
//! [`REFACTOR_INTERVAL`] pivots. Phase 1 minimises the total bound
//! infeasibility of the basic variables directly (no artificial columns),
//! which also makes warm starts from an arbitrary basis cheap: the search
//! simply starts from that basis and repairs whatever the new bounds broke.
//!
//! Pricing is Dantzig's rule; after [`STALL_FACTOR`]`*(m+n)` consecutive
//! degenerate pivots the solver permanently switches to Bland's rule, which
//! guarantees termination on degenerate instances.

use crate::milp::MilpProblem;
use crate::solver::SolverError;

/// Absolute tolerance on bound/constraint feasibility.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Reduced costs smaller than this (in absolute value) count as zero.
const REDUCED_COST_TOL: f64 = 1e-9;
/// Pivot elements smaller than this are rejected in the ratio test.
const PIVOT_TOL: f64 = 1e-9;
/// Steps shorter than this count as degenerate for stall detection.
const DEGENERATE_STEP: f64 = 1e-10;
/// Full refactorisation cadence, in pivots.
const REFACTOR_INTERVAL: u32 = 50;
/// Bland's rule engages after `STALL_FACTOR * (m + n)` degenerate pivots.
const STALL_FACTOR: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Where a variable sits relative to the basis; the exported form of the
/// solver state, sufficient to warm-start a later solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSide {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable parked at zero.
    Free,
}

/// Basis description: one [`VarSide`] per variable (structurals followed by
/// one logical per row).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSnapshot(pub(crate) Vec<VarSide>);

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; `+inf` for infeasible, `-inf` for unbounded.
    pub objective: f64,
    /// Structural variable values (logicals stripped).
    pub values: Vec<f64>,
    pub basis: BasisSnapshot,
    /// Simplex pivots spent across both phases.
    pub iterations: u64,
}

/// Solves the LP relaxation of `problem` (integrality flags are ignored).
pub fn solve_lp(problem: &MilpProblem) -> Result<LpSolution, SolverError> {
    problem.validate()?;
    let mut simplex = Simplex::new(problem);
    simplex.init(None)?;
    simplex.run()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    One,
    Two,
}

/// Reusable simplex state. Branch-and-bound keeps one instance alive and
/// re-solves after adjusting structural bounds, warm-starting from the
/// parent node's basis.
pub struct Simplex {
    m: usize,
    n_struct: usize,
    /// Total variables: structurals then one logical per row.
    n: usize,
    /// Sparse columns over rows, logicals included.
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    rhs: Vec<f64>,
    /// Original structural bounds (for `reset_bounds`).
    orig_lower: Vec<f64>,
    orig_upper: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,

    basis: Vec<usize>,
    side: Vec<VarSide>,
    /// Row of each basic variable (valid when side == Basic).
    basic_row: Vec<usize>,
    x: Vec<f64>,
    /// Dense row-major m*m basis inverse.
    b_inv: Vec<f64>,

    pivots: u64,
    pivots_since_refactor: u32,
    degenerate_run: u64,
    bland: bool,

    // scratch
    work_col: Vec<f64>,
    work_y: Vec<f64>,
    work_cb: Vec<f64>,
}

impl Simplex {
    pub fn new(problem: &MilpProblem) -> Self {
        let m = problem.num_constraints();
        let n_struct = problem.num_vars();
        let n = n_struct + m;

        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut rhs = Vec::with_capacity(m);
        let mut lower = problem.lower.clone();
        let mut upper = problem.upper.clone();
        for (r, row) in problem.constraints.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                if a != 0.0 {
                    cols[j].push((r, a));
                }
            }
            cols[n_struct + r].push((r, 1.0));
            rhs.push(row.rhs);
            let (lo, hi) = match row.relation {
                crate::milp::Relation::Le => (0.0, f64::INFINITY),
                crate::milp::Relation::Ge => (f64::NEG_INFINITY, 0.0),
                crate::milp::Relation::Eq => (0.0, 0.0),
            };
            lower.push(lo);
            upper.push(hi);
        }
        let mut cost = problem.objective.clone();
        cost.resize(n, 0.0);

        Simplex {
            m,
            n_struct,
            n,
            cols,
            cost,
            rhs,
            orig_lower: lower.clone(),
            orig_upper: upper.clone(),
            lower,
            upper,
            basis: Vec::new(),
            side: Vec::new(),
            basic_row: vec![0; n],
            x: vec![0.0; n],
            b_inv: Vec::new(),
            pivots: 0,
            pivots_since_refactor: 0,
            degenerate_run: 0,
            bland: false,
            work_col: vec![0.0; m],
            work_y: vec![0.0; m],
            work_cb: vec![0.0; m],
        }
    }

    /// Restore the bounds the solver was built with.
    pub fn reset_bounds(&mut self) {
        self.lower.copy_from_slice(&self.orig_lower);
        self.upper.copy_from_slice(&self.orig_upper);
    }

    /// Tighten one structural variable (used by branch-and-bound).
    pub fn set_var_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        debug_assert!(var < self.n_struct);
        self.lower[var] = lo;
        self.upper[var] = hi;
    }

    /// Install a starting basis (all-logical when `None`) and compute the
    /// matching primal point.
    pub fn init(&mut self, warm: Option<&BasisSnapshot>) -> Result<(), SolverError> {
        self.pivots = 0;
        self.pivots_since_refactor = 0;
        self.degenerate_run = 0;
        self.bland = false;

        match warm {
            Some(snapshot) if snapshot.0.len() == self.n => {
                self.basis = snapshot
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| **s == VarSide::Basic)
                    .map(|(j, _)| j)
                    .collect();
                if self.basis.len() != self.m {
                    return Err(SolverError::SingularBasis);
                }
                self.side = snapshot.0.clone();
                // Bounds may have changed since the snapshot: re-derive the
                // side of every nonbasic so it sits on a bound that exists.
                for j in 0..self.n {
                    if self.side[j] == VarSide::Basic {
                        continue;
                    }
                    self.side[j] = self.default_side(j, self.side[j]);
                }
            }
            _ => {
                self.basis = (self.n_struct..self.n).collect();
                self.side = Vec::with_capacity(self.n);
                for j in 0..self.n_struct {
                    self.side.push(self.default_side(j, VarSide::AtLower));
                }
                self.side.extend(std::iter::repeat(VarSide::Basic).take(self.m));
            }
        }
        for (r, &j) in self.basis.iter().enumerate() {
            self.basic_row[j] = r;
        }
        self.refactor()?;
        self.compute_x();
        Ok(())
    }

    fn default_side(&self, j: usize, preferred: VarSide) -> VarSide {
        let lo = self.lower[j];
        let hi = self.upper[j];
        match preferred {
            VarSide::AtUpper if hi.is_finite() => VarSide::AtUpper,
            VarSide::Free if lo == f64::NEG_INFINITY && hi == f64::INFINITY => VarSide::Free,
            _ => {
                if lo.is_finite() {
                    VarSide::AtLower
                } else if hi.is_finite() {
                    VarSide::AtUpper
                } else {
                    VarSide::Free
                }
            }
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.side[j] {
            VarSide::AtLower => self.lower[j],
            VarSide::AtUpper => self.upper[j],
            VarSide::Free => 0.0,
            VarSide::Basic => unreachable!(),
        }
    }

    /// Rebuild the dense basis inverse from scratch (Gauss-Jordan with
    /// partial pivoting).
    fn refactor(&mut self) -> Result<(), SolverError> {
        let m = self.m;
        self.pivots_since_refactor = 0;
        if m == 0 {
            self.b_inv.clear();
            return Ok(());
        }
        // Augmented [B | I], reduced in place.
        let mut mat = vec![0.0f64; m * 2 * m];
        let w = 2 * m;
        for (c, &j) in self.basis.iter().enumerate() {
            for &(r, a) in &self.cols[j] {
                mat[r * w + c] = a;
            }
        }
        for r in 0..m {
            mat[r * w + m + r] = 1.0;
        }
        for col in 0..m {
            let mut best = col;
            let mut best_abs = mat[col * w + col].abs();
            for r in col + 1..m {
                let v = mat[r * w + col].abs();
                if v > best_abs {
                    best = r;
                    best_abs = v;
                }
            }
            if best_abs < 1e-11 {
                return Err(SolverError::SingularBasis);
            }
            if best != col {
                for c in 0..w {
                    mat.swap(col * w + c, best * w + c);
                }
            }
            let inv_pivot = 1.0 / mat[col * w + col];
            for c in 0..w {
                mat[col * w + c] *= inv_pivot;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let factor = mat[r * w + col];
                if factor != 0.0 {
                    for c in 0..w {
                        mat[r * w + c] -= factor * mat[col * w + c];
                    }
                }
            }
        }
        self.b_inv.resize(m * m, 0.0);
        for r in 0..m {
            self.b_inv[r * m..(r + 1) * m].copy_from_slice(&mat[r * w + m..r * w + 2 * m]);
        }
        Ok(())
    }

    /// Set nonbasics on their bounds and solve `B x_B = b - N x_N`.
    fn compute_x(&mut self) {
        let m = self.m;
        let mut adjusted = self.rhs.clone();
        for j in 0..self.n {
            if self.side[j] == VarSide::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            self.x[j] = v;
            if v != 0.0 {
                for &(r, a) in &self.cols[j] {
                    adjusted[r] -= a * v;
                }
            }
        }
        for r in 0..m {
            let mut sum = 0.0;
            let row = &self.b_inv[r * m..(r + 1) * m];
            for c in 0..m {
                sum += row[c] * adjusted[c];
            }
            self.x[self.basis[r]] = sum;
        }
    }

    fn total_infeasibility(&self) -> f64 {
        let mut total = 0.0;
        for &j in &self.basis {
            let v = self.x[j];
            if v < self.lower[j] {
                total += self.lower[j] - v;
            } else if v > self.upper[j] {
                total += v - self.upper[j];
            }
        }
        total
    }

    /// `y = B^-T cb` where `cb` is the cost of each basic variable.
    fn btran(&mut self) {
        let m = self.m;
        for i in 0..m {
            self.work_y[i] = 0.0;
        }
        for r in 0..m {
            let c = self.work_cb[r];
            if c != 0.0 {
                let row = &self.b_inv[r * m..(r + 1) * m];
                for i in 0..m {
                    self.work_y[i] += c * row[i];
                }
            }
        }
    }

    fn reduced_cost(&self, j: usize, phase: Phase) -> f64 {
        let c = match phase {
            Phase::One => 0.0,
            Phase::Two => self.cost[j],
        };
        let mut dot = 0.0;
        for &(r, a) in &self.cols[j] {
            dot += self.work_y[r] * a;
        }
        c - dot
    }

    fn run_phase(&mut self, phase: Phase) -> Result<LpStatus, SolverError> {
        let max_pivots = 200_000 + 200 * (self.m as u64 + self.n as u64);
        loop {
            if self.pivots > max_pivots {
                return Err(SolverError::IterationLimit(self.pivots));
            }
            if phase == Phase::One && self.total_infeasibility() <= FEASIBILITY_TOL {
                return Ok(LpStatus::Optimal);
            }

            // Basic costs for pricing.
            for r in 0..self.m {
                let j = self.basis[r];
                self.work_cb[r] = match phase {
                    Phase::Two => self.cost[j],
                    Phase::One => {
                        if self.x[j] < self.lower[j] - FEASIBILITY_TOL {
                            -1.0
                        } else if self.x[j] > self.upper[j] + FEASIBILITY_TOL {
                            1.0
                        } else {
                            0.0
                        }
                    }
                };
            }
            self.btran();

            let entering = self.price(phase);
            let Some((q, direction)) = entering else {
                return match phase {
                    Phase::One => Ok(LpStatus::Infeasible),
                    Phase::Two => Ok(LpStatus::Optimal),
                };
            };

            // work_col = B^-1 a_q
            self.solve_column(q);

            let step = self.ratio_test(q, direction, phase)?;
            match step {
                Step::Unbounded => {
                    return match phase {
                        Phase::One => Err(SolverError::Numerical(
                            "phase 1 found no blocking bound".into(),
                        )),
                        Phase::Two => Ok(LpStatus::Unbounded),
                    };
                }
                Step::BoundFlip { t } => {
                    self.apply_step(q, direction, t);
                    self.side[q] = match self.side[q] {
                        VarSide::AtLower => VarSide::AtUpper,
                        VarSide::AtUpper => VarSide::AtLower,
                        other => other,
                    };
                    self.x[q] = self.nonbasic_value(q);
                    self.note_step(t);
                }
                Step::Pivot { row, t, leave_side } => {
                    self.apply_step(q, direction, t);
                    let leaving = self.basis[row];
                    self.side[leaving] = leave_side;
                    self.x[leaving] = self.nonbasic_value(leaving);
                    self.basis[row] = q;
                    self.basic_row[q] = row;
                    self.side[q] = VarSide::Basic;
                    self.update_b_inv(row);
                    self.pivots += 1;
                    self.pivots_since_refactor += 1;
                    if self.pivots_since_refactor >= REFACTOR_INTERVAL {
                        self.refactor()?;
                        self.compute_x();
                    }
                    self.note_step(t);
                }
            }
        }
    }

    fn note_step(&mut self, t: f64) {
        if t <= DEGENERATE_STEP {
            self.degenerate_run += 1;
            if self.degenerate_run >= STALL_FACTOR * (self.m as u64 + self.n as u64) {
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
        }
    }

    /// Pick the entering variable. Returns `(var, direction)` where the
    /// direction is +1 when the variable increases.
    fn price(&self, phase: Phase) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None; // (var, direction, score)
        for j in 0..self.n {
            let side = self.side[j];
            if side == VarSide::Basic {
                continue;
            }
            if self.lower[j] == self.upper[j] {
                continue; // fixed: can never move
            }
            let d = self.reduced_cost(j, phase);
            let (eligible, direction) = match side {
                VarSide::AtLower => (d < -REDUCED_COST_TOL, 1.0),
                VarSide::AtUpper => (d > REDUCED_COST_TOL, -1.0),
                VarSide::Free => (d.abs() > REDUCED_COST_TOL, if d > 0.0 { -1.0 } else { 1.0 }),
                VarSide::Basic => unreachable!(),
            };
            if !eligible {
                continue;
            }
            if self.bland {
                return Some((j, direction));
            }
            let score = d.abs();
            match best {
                Some((_, _, s)) if s >= score => {}
                _ => best = Some((j, direction, score)),
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn solve_column(&mut self, q: usize) {
        let m = self.m;
        for i in 0..m {
            self.work_col[i] = 0.0;
        }
        for &(r, a) in &self.cols[q] {
            for i in 0..m {
                self.work_col[i] += a * self.b_inv[i * m + r];
            }
        }
    }

    /// Move entering variable by `t * direction` and update the basics.
    fn apply_step(&mut self, q: usize, direction: f64, t: f64) {
        if t == 0.0 {
            return;
        }
        self.x[q] += direction * t;
        for r in 0..self.m {
            let w = self.work_col[r];
            if w != 0.0 {
                self.x[self.basis[r]] -= direction * t * w;
            }
        }
    }

    /// Product-form update after the entering column replaced `row`.
    fn update_b_inv(&mut self, row: usize) {
        let m = self.m;
        let pivot = self.work_col[row];
        let inv_pivot = 1.0 / pivot;
        for c in 0..m {
            self.b_inv[row * m + c] *= inv_pivot;
        }
        for r in 0..m {
            if r == row {
                continue;
            }
            let factor = self.work_col[r];
            if factor != 0.0 {
                for c in 0..m {
                    self.b_inv[r * m + c] -= factor * self.b_inv[row * m + c];
                }
            }
        }
    }

    fn ratio_test(&self, q: usize, direction: f64, phase: Phase) -> Result<Step, SolverError> {
        let mut t_best = f64::INFINITY;
        let mut blocker: Option<(usize, VarSide, f64)> = None; // (row, leave side, |pivot|)

        // The entering variable's own opposite bound.
        let gap = self.upper[q] - self.lower[q];
        if gap.is_finite() {
            t_best = gap;
        }

        for r in 0..self.m {
            let w = self.work_col[r];
            if w.abs() <= PIVOT_TOL {
                continue;
            }
            let j = self.basis[r];
            let rate = -direction * w; // d x_j / d t
            let xj = self.x[j];
            let lo = self.lower[j];
            let hi = self.upper[j];

            let infeasible_low = xj < lo - FEASIBILITY_TOL;
            let infeasible_high = xj > hi + FEASIBILITY_TOL;

            let (limit, leave_side) = if phase == Phase::One && infeasible_low {
                if rate > 0.0 {
                    // Climbing towards the violated lower bound: the cost
                    // kinks there, stop at the bound.
                    ((lo - xj) / rate, VarSide::AtLower)
                } else {
                    continue; // moving further away; still linear
                }
            } else if phase == Phase::One && infeasible_high {
                if rate < 0.0 {
                    ((hi - xj) / rate, VarSide::AtUpper)
                } else {
                    continue;
                }
            } else if rate < 0.0 {
                if lo == f64::NEG_INFINITY {
                    continue;
                }
                ((lo - xj) / rate, VarSide::AtLower)
            } else {
                if hi == f64::INFINITY {
                    continue;
                }
                ((hi - xj) / rate, VarSide::AtUpper)
            };
            let limit = limit.max(0.0);

            let better = if self.bland {
                // Bland: smallest ratio, ties by lowest basic variable index.
                limit < t_best - 1e-12
                    || (limit <= t_best + 1e-12
                        && blocker.map_or(limit < t_best, |(br, _, _)| j < self.basis[br]))
            } else {
                // Smallest ratio, ties by largest pivot magnitude.
                limit < t_best - 1e-12
                    || (limit <= t_best + 1e-12
                        && blocker.map_or(limit < t_best, |(_, _, bp)| w.abs() > bp))
            };
            if better {
                t_best = t_best.min(limit);
                blocker = Some((r, leave_side, w.abs()));
            }
        }

        match blocker {
            None if t_best.is_infinite() => Ok(Step::Unbounded),
            None => Ok(Step::BoundFlip { t: t_best }),
            Some((row, leave_side, _)) => {
                // The entering variable's own bound may still be the tighter
                // limit.
                if gap.is_finite() && gap < t_best - 1e-12 {
                    Ok(Step::BoundFlip { t: gap })
                } else {
                    Ok(Step::Pivot { row, t: t_best, leave_side })
                }
            }
        }
    }

    /// Run both phases from the installed basis.
    pub fn run(&mut self) -> Result<LpSolution, SolverError> {
        let status = match self.run_phase(Phase::One)? {
            LpStatus::Infeasible => LpStatus::Infeasible,
            _ => self.run_phase(Phase::Two)?,
        };

        if status == LpStatus::Optimal {
            // Fresh factorisation keeps the reported point tight.
            self.refactor()?;
            self.compute_x();
        }

        let objective = match status {
            LpStatus::Optimal => (0..self.n_struct).map(|j| self.cost[j] * self.x[j]).sum(),
            LpStatus::Infeasible => f64::INFINITY,
            LpStatus::Unbounded => f64::NEG_INFINITY,
        };
        Ok(LpSolution {
            status,
            objective,
            values: self.x[..self.n_struct].to_vec(),
            basis: BasisSnapshot(self.side.clone()),
            iterations: self.pivots,
        })
    }
}

enum Step {
    /// Entering variable travels to its opposite bound; no basis change.
    BoundFlip { t: f64 },
    /// Basic variable in `row` leaves towards `leave_side`.
    Pivot { row: usize, t: f64, leave_side: VarSide },
    Unbounded,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{ProblemBuilder, Relation};

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn single_lower_bound_active() {
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", 0.0, 10.0, false, 1.0);
        b.add_row("r1", vec![(x, 1.0)], Relation::Ge, 3.0);
        let sol = solve_lp(&b.finish()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.objective, 3.0);
        assert_close(sol.values[x], 3.0);
    }

    #[test]
    fn two_dimensional_polytope() {
        // min -x - y s.t. x + 2y <= 4, 0<=x<=3, 0<=y<=3: optimum (3, 0.5).
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", 0.0, 3.0, false, -1.0);
        let y = b.add_var("y", 0.0, 3.0, false, -1.0);
        b.add_row("cap", vec![(x, 1.0), (y, 2.0)], Relation::Le, 4.0);
        let sol = solve_lp(&b.finish()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.objective, -3.5);
        assert_close(sol.values[x], 3.0);
        assert_close(sol.values[y], 0.5);
    }

    #[test]
    fn empty_feasible_set() {
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", f64::NEG_INFINITY, f64::INFINITY, false, 0.0);
        b.add_row("ge", vec![(x, 1.0)], Relation::Ge, 1.0);
        b.add_row("le", vec![(x, 1.0)], Relation::Le, 0.0);
        let sol = solve_lp(&b.finish()).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", 0.0, f64::INFINITY, false, -1.0);
        b.add_row("r", vec![(x, -1.0)], Relation::Le, 0.0);
        let sol = solve_lp(&b.finish()).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_with_negative_range() {
        // min x + 2y s.t. x + y = 2, -5 <= y <= 5, 0 <= x <= 10.
        // Substituting x = 2 - y gives 2 + y, so y heads to its floor.
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", 0.0, 10.0, false, 1.0);
        let y = b.add_var("y", -5.0, 5.0, false, 2.0);
        b.add_row("sum", vec![(x, 1.0), (y, 1.0)], Relation::Eq, 2.0);
        let sol = solve_lp(&b.finish()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.values[x], 7.0);
        assert_close(sol.values[y], -5.0);
        assert_close(sol.objective, -3.0);
    }

    #[test]
    fn truly_free_variable() {
        // min y s.t. x + y >= 1, x <= 4, y free: y can fall without limit
        // only if x is capped... x <= 4 forces y >= -3.
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", 0.0, 4.0, false, 0.0);
        let y = b.add_var("y", f64::NEG_INFINITY, f64::INFINITY, false, 1.0);
        b.add_row("sum", vec![(x, 1.0), (y, 1.0)], Relation::Ge, 1.0);
        let sol = solve_lp(&b.finish()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.objective, -3.0);
        assert_close(sol.values[y], -3.0);
    }

    #[test]
    fn fixed_variables_contribute_constants() {
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", 2.0, 2.0, false, 3.0);
        let y = b.add_var("y", 0.0, 10.0, false, 1.0);
        b.add_row("r", vec![(x, 1.0), (y, 1.0)], Relation::Ge, 5.0);
        let sol = solve_lp(&b.finish()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.values[y], 3.0);
        assert_close(sol.objective, 9.0);
    }

    #[test]
    fn no_constraints_at_all() {
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", -1.0, 4.0, false, -2.0);
        let sol = solve_lp(&b.finish()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.values[x], 4.0);
        assert_close(sol.objective, -8.0);
    }

    #[test]
    fn negative_rhs_equalities() {
        // min x s.t. x + y = -3, -10 <= x,y <= 0, minimise x -> x = -3 when
        // y = 0... actually x can go to -10 with y = 7 > 0 infeasible, so
        // x in [-3 - 0, -3 - (-10)]: x = -3 - y, y in [-10, 0] so x in
        // [-3, 7] clamped to [-10, 0] -> x in [-3, 0]; minimum is -3.
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", -10.0, 0.0, false, 1.0);
        let y = b.add_var("y", -10.0, 0.0, false, 0.0);
        b.add_row("sum", vec![(x, 1.0), (y, 1.0)], Relation::Eq, -3.0);
        let sol = solve_lp(&b.finish()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.objective, -3.0);
    }

    #[test]
    fn warm_start_after_bound_change() {
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", 0.0, 1.0, false, -2.0);
        let y = b.add_var("y", 0.0, 1.0, false, -1.0);
        b.add_row("cap", vec![(x, 1.0), (y, 1.0)], Relation::Le, 1.5);
        let problem = b.finish();

        let mut spx = Simplex::new(&problem);
        spx.init(None).unwrap();
        let sol = spx.run().unwrap();
        assert_close(sol.objective, -2.5);

        // Fix x to 0 and re-solve from the previous basis.
        spx.set_var_bounds(x, 0.0, 0.0);
        spx.init(Some(&sol.basis)).unwrap();
        let sol2 = spx.run().unwrap();
        assert_eq!(sol2.status, LpStatus::Optimal);
        assert_close(sol2.objective, -1.0);
        assert_close(sol2.values[y], 1.0);
    }
}
