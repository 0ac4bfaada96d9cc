//! Language-neutral standard-form MILP: minimise `c·x` subject to linear
//! rows `a·x {<=,=,>=} b`, variable bounds and integrality flags.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    /// MPS row type letter.
    pub fn mps_tag(self) -> char {
        match self {
            Relation::Le => 'L',
            Relation::Eq => 'E',
            Relation::Ge => 'G',
        }
    }
}

/// One linear constraint, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    /// `(variable index, coefficient)` pairs; indices must be unique.
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    /// Signed residual of the row at `x`: positive means the row is violated
    /// in the direction of its relation.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs: f64 = self.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
        match self.relation {
            Relation::Le => lhs - self.rhs,
            Relation::Ge => self.rhs - lhs,
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// A minimisation MILP. Binaries are integer variables with bounds `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MilpProblem {
    /// Objective coefficients, one per variable (sense: minimise).
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub integer: Vec<bool>,
    /// Diagnostic names, one per variable.
    pub var_names: Vec<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("dimension mismatch: objective has {objective} entries, bounds {lower}/{upper}, integrality {integer}, names {names}")]
    DimensionMismatch {
        objective: usize,
        lower: usize,
        upper: usize,
        integer: usize,
        names: usize,
    },
    #[error("constraint {row} ({name}) references variable {var} out of {num_vars}")]
    BadVariableIndex {
        row: usize,
        name: String,
        var: usize,
        num_vars: usize,
    },
    #[error("constraint {row} ({name}) has a non-finite coefficient or rhs")]
    NonFiniteCoefficient { row: usize, name: String },
    #[error("objective coefficient for variable {var} ({name}) is not finite")]
    NonFiniteObjective { var: usize, name: String },
    #[error("variable {var} ({name}) has empty bound range [{lower}, {upper}]")]
    EmptyBounds {
        var: usize,
        name: String,
        lower: f64,
        upper: f64,
    },
}

impl MilpProblem {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_fixed(&self, var: usize) -> bool {
        self.lower[var] == self.upper[var]
    }

    /// Objective value at `x`.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Checks the structural invariants: consistent dimensions, in-range
    /// variable indices, finite coefficients, non-empty bound ranges.
    pub fn validate(&self) -> Result<(), ProblemError> {
        let n = self.objective.len();
        if self.lower.len() != n
            || self.upper.len() != n
            || self.integer.len() != n
            || self.var_names.len() != n
        {
            return Err(ProblemError::DimensionMismatch {
                objective: n,
                lower: self.lower.len(),
                upper: self.upper.len(),
                integer: self.integer.len(),
                names: self.var_names.len(),
            });
        }
        for (var, &c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(ProblemError::NonFiniteObjective {
                    var,
                    name: self.var_names[var].clone(),
                });
            }
        }
        for (var, (&lo, &hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(ProblemError::EmptyBounds {
                    var,
                    name: self.var_names[var].clone(),
                    lower: lo,
                    upper: hi,
                });
            }
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(ProblemError::NonFiniteCoefficient { row, name: c.name.clone() });
            }
            for &(var, a) in &c.coeffs {
                if var >= n {
                    return Err(ProblemError::BadVariableIndex {
                        row,
                        name: c.name.clone(),
                        var,
                        num_vars: n,
                    });
                }
                if !a.is_finite() {
                    return Err(ProblemError::NonFiniteCoefficient { row, name: c.name.clone() });
                }
            }
        }
        Ok(())
    }
}

/// Convenience builder used by the model assembler and the test suites.
#[derive(Debug, Default)]
pub struct ProblemBuilder {
    problem: MilpProblem,
}

impl ProblemBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        integer: bool,
        objective: f64,
    ) -> usize {
        let idx = self.problem.objective.len();
        self.problem.objective.push(objective);
        self.problem.lower.push(lower);
        self.problem.upper.push(upper);
        self.problem.integer.push(integer);
        self.problem.var_names.push(name.into());
        idx
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(usize, f64)>,
        relation: Relation,
        rhs: f64,
    ) {
        self.problem.constraints.push(Constraint {
            name: name.into(),
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.problem.objective[var] = coeff;
    }

    /// Clamp a variable to a single value.
    pub fn fix_var(&mut self, var: usize, value: f64) {
        self.problem.lower[var] = value;
        self.problem.upper[var] = value;
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.problem.lower[var], self.problem.upper[var])
    }

    pub fn finish(self) -> MilpProblem {
        self.problem
    }
}
