//! Propositional satisfiability: CNF, a bundled CDCL solver, DIMACS I/O and
//! an optional external solver.

mod cdcl;
mod dimacs;
mod external;

use std::fmt;
use std::ops::Not;

pub use cdcl::Solver;
pub use dimacs::{parse_dimacs, parse_solver_output, write_dimacs};
pub use external::{solve_external, ExternalSolverError};

use crate::budget::Deadline;

/// Literal encoded as `var << 1 | negated`; variables are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, negated: bool) -> Lit {
        Lit(var << 1 | u32::from(negated))
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(var, false)
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based signed DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var()) + 1;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    pub fn from_dimacs(x: i64) -> Lit {
        assert!(x != 0, "0 is not a literal");
        Lit::new((x.unsigned_abs() - 1) as u32, x < 0)
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        for l in &clause {
            self.num_vars = self.num_vars.max(l.var() + 1);
        }
        self.clauses.push(clause);
    }

    /// Whether `model` (indexed by variable) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|l| model.get(l.var() as usize).copied().unwrap_or(false) != l.is_negated())
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    /// Assignment indexed by variable.
    Sat(Vec<bool>),
    Unsat,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub seed: u64,
    pub max_conflicts: Option<u64>,
    /// Command line of an external DIMACS solver; the CNF file path is
    /// appended as the last argument.
    pub external: Option<String>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { seed: 0, max_conflicts: None, external: None }
    }
}

/// Solves with the external solver when configured, falling back to the
/// bundled solver on any external failure.
pub fn solve(cnf: &Cnf, config: &SolverConfig, deadline: &Deadline) -> SolveResult {
    if let Some(cmd) = &config.external {
        if let Ok(r) = solve_external(cnf, cmd, deadline) {
            return r;
        }
    }
    let mut s = Solver::new(cnf, config.seed);
    s.solve(config.max_conflicts, deadline)
}
