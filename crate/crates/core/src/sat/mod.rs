//! Propositional formulas in conjunctive normal form.

mod dimacs;
mod dpll;
mod propagate;

pub use dimacs::{parse_dimacs, parse_dimacs_with_report, write_dimacs, ParseReport};
pub use dpll::{dp_solve, BranchPlan, SearchStats, Status};
pub use propagate::{unit_propagate, Propagation};

use std::fmt;
use std::ops::Not;

use crate::error::{Error, Result};

/// A literal in DIMACS convention: `v` is the positive literal of variable
/// `v`, `-v` its negation. Zero is never a valid literal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        assert!(var >= 1, "variables are numbered from 1");
        let v = var as i32;
        Lit(if positive { v } else { -v })
    }

    pub fn from_dimacs(value: i32) -> Option<Lit> {
        (value != 0).then_some(Lit(value))
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    /// The truth value this literal needs from its variable to be true.
    pub fn polarity(self) -> bool {
        self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A disjunction of literals. The empty clause is the conflict clause.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Builds a clause, dropping repeated literals while keeping the first
    /// occurrence order.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut out: Vec<Lit> = Vec::new();
        for l in lits {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Clause { lits: out }
    }

    pub fn from_dimacs(values: &[i32]) -> Clause {
        Clause::new(values.iter().filter_map(|&v| Lit::from_dimacs(v)))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(|&l| self.lits.contains(&!l))
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.contains(&lit)
    }

    /// Variables of the clause in literal order.
    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    /// `Some(true)` if some literal is true, `Some(false)` if all are false,
    /// `None` otherwise.
    pub fn eval(&self, a: &Assignment) -> Option<bool> {
        let mut open = false;
        for &l in &self.lits {
            match a.lit_value(l) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => open = true,
            }
        }
        if open {
            None
        } else {
            Some(false)
        }
    }
}

/// A CNF formula. Clause order is significant: it fixes propagation order
/// and the layout of every encoding derived from the formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Cnf> {
        for (i, c) in clauses.iter().enumerate() {
            if let Some(l) = c.lits().iter().find(|l| l.var() > num_vars) {
                return Err(Error::Invalid(format!(
                    "clause {i}: literal {l} exceeds declared {num_vars} variables"
                )));
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// Convenience constructor from DIMACS-style integer clauses.
    pub fn from_ints(num_vars: u32, clauses: &[&[i32]]) -> Result<Cnf> {
        Cnf::new(num_vars, clauses.iter().map(|c| Clause::from_dimacs(c)).collect())
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// Variables in order of first occurrence across the clause sequence,
    /// followed by the variables that never occur, ascending.
    pub fn first_occurrence_order(&self) -> Vec<u32> {
        let mut seen = vec![false; self.num_vars as usize + 1];
        let mut order = Vec::with_capacity(self.num_vars as usize);
        for v in self.clauses.iter().flat_map(|c| c.vars()) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                order.push(v);
            }
        }
        order.extend((1..=self.num_vars).filter(|&v| !seen[v as usize]));
        order
    }
}

/// A partial map from variables `1..=num_vars` to truth values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new(num_vars: u32) -> Assignment {
        Assignment {
            values: vec![None; num_vars as usize + 1],
        }
    }

    pub fn from_values(values: &[bool]) -> Assignment {
        let mut a = Assignment::new(values.len() as u32);
        for (i, &v) in values.iter().enumerate() {
            a.set(i as u32 + 1, v);
        }
        a
    }

    pub fn num_vars(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.values.get(var as usize).copied().flatten()
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.values[var as usize] = Some(value);
    }

    pub fn unset(&mut self, var: u32) {
        self.values[var as usize] = None;
    }

    pub fn assign_lit(&mut self, lit: Lit) {
        self.set(lit.var(), lit.polarity());
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|v| v == lit.polarity())
    }

    pub fn is_total(&self) -> bool {
        self.values[1..].iter().all(Option::is_some)
    }

    pub fn assigned(&self) -> usize {
        self.values[1..].iter().filter(|v| v.is_some()).count()
    }

    /// Assigned variables with their values, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .filter_map(|(i, v)| v.map(|b| (i as u32, b)))
    }

    /// True iff every assignment made here is also made (identically) in `other`.
    pub fn is_subset_of(&self, other: &Assignment) -> bool {
        self.iter().all(|(v, b)| other.get(v) == Some(b))
    }

    /// Fills every unassigned variable with `value`.
    pub fn completed(&self, value: bool) -> Assignment {
        Assignment {
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| if i == 0 { None } else { Some(v.unwrap_or(value)) })
                .collect(),
        }
    }
}

/// True iff every clause has a literal true under the total assignment `a`.
pub fn check_model(f: &Cnf, a: &Assignment) -> Result<bool> {
    if a.num_vars() < f.num_vars() {
        return Err(Error::PartialAssignment(a.num_vars() + 1));
    }
    if let Some(v) = (1..=f.num_vars()).find(|&v| a.get(v).is_none()) {
        return Err(Error::PartialAssignment(v));
    }
    Ok(f.clauses().iter().all(|c| c.eval(a) == Some(true)))
}
