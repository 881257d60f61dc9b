//! Finite-domain CSPs with extensional constraints.

mod format;
mod propagate;
mod search;

pub use format::{parse_csp, write_csp};
pub use propagate::{ac3, gac, Pruning};
pub use search::{fc_solve, mac_solve, CspBranchPlan, CspSearchStats};

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A variable with an ordered domain of opaque value labels. Values are
/// referred to by their index in `domain` everywhere else.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CspVariable {
    pub id: usize,
    pub domain: Vec<String>,
}

impl CspVariable {
    pub fn new(id: usize, domain: impl IntoIterator<Item = impl Into<String>>) -> CspVariable {
        CspVariable {
            id,
            domain: domain.into_iter().map(Into::into).collect(),
        }
    }

    /// Variable with labels `"1"..="d"`.
    pub fn range(id: usize, d: usize) -> CspVariable {
        CspVariable::new(id, (1..=d).map(|v| v.to_string()))
    }

    pub fn value_index(&self, label: &str) -> Option<usize> {
        self.domain.iter().position(|l| l == label)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    Allows,
    Forbids,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Allows => "allows",
            Semantics::Forbids => "forbids",
        }
    }
}

/// A constraint listing allowed or forbidden tuples of value indices over
/// its scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionalConstraint {
    scope: Vec<usize>,
    semantics: Semantics,
    tuples: BTreeSet<Vec<usize>>,
}

impl ExtensionalConstraint {
    pub fn new(
        scope: Vec<usize>,
        semantics: Semantics,
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> ExtensionalConstraint {
        ExtensionalConstraint {
            scope,
            semantics,
            tuples: tuples.into_iter().collect(),
        }
    }

    pub fn allows_tuples(scope: Vec<usize>, tuples: impl IntoIterator<Item = Vec<usize>>) -> Self {
        Self::new(scope, Semantics::Allows, tuples)
    }

    pub fn forbids_tuples(scope: Vec<usize>, tuples: impl IntoIterator<Item = Vec<usize>>) -> Self {
        Self::new(scope, Semantics::Forbids, tuples)
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<usize>> {
        &self.tuples
    }

    /// Whether the tuple (of value indices, in scope order) is permitted.
    pub fn allows(&self, tuple: &[usize]) -> bool {
        let listed = self.tuples.contains(tuple);
        match self.semantics {
            Semantics::Allows => listed,
            Semantics::Forbids => !listed,
        }
    }

    /// The tuples re-expressed over `target`, a permutation of the scope.
    fn reordered(&self, target: &[usize]) -> BTreeSet<Vec<usize>> {
        let pos: Vec<usize> = target
            .iter()
            .map(|v| self.scope.iter().position(|s| s == v).expect("same scope set"))
            .collect();
        self.tuples
            .iter()
            .map(|t| pos.iter().map(|&p| t[p]).collect())
            .collect()
    }
}

/// A CSP: ordered variables plus ordered constraints, at most one
/// constraint per scope set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Csp {
    variables: Vec<CspVariable>,
    constraints: Vec<ExtensionalConstraint>,
}

impl Csp {
    /// Validates the model and merges constraints sharing a scope set into
    /// the first one (their conjunction, over the first one's scope order).
    ///
    /// Variables must carry ids `0..n` in order. An empty domain is accepted
    /// and makes the instance trivially unsatisfiable.
    pub fn new(variables: Vec<CspVariable>, constraints: Vec<ExtensionalConstraint>) -> Result<Csp> {
        for (i, v) in variables.iter().enumerate() {
            if v.id != i {
                return Err(Error::Invalid(format!("variable at position {i} has id {}", v.id)));
            }
            let distinct: BTreeSet<&String> = v.domain.iter().collect();
            if distinct.len() != v.domain.len() {
                return Err(Error::Invalid(format!("variable {i} has duplicate values")));
            }
        }
        let mut merged: Vec<ExtensionalConstraint> = Vec::new();
        for (k, c) in constraints.into_iter().enumerate() {
            if c.scope.len() < 2 {
                return Err(Error::Invalid(format!("constraint {k} has arity {} < 2", c.scope.len())));
            }
            let distinct: BTreeSet<usize> = c.scope.iter().copied().collect();
            if distinct.len() != c.scope.len() {
                return Err(Error::Invalid(format!("constraint {k} repeats a variable in its scope")));
            }
            for &v in &c.scope {
                if v >= variables.len() {
                    return Err(Error::Invalid(format!("constraint {k} references unknown variable {v}")));
                }
            }
            for t in &c.tuples {
                if t.len() != c.scope.len() {
                    return Err(Error::Invalid(format!("constraint {k} has a tuple of width {}", t.len())));
                }
                for (&v, &val) in c.scope.iter().zip(t) {
                    if val >= variables[v].domain.len() {
                        return Err(Error::ValueOutOfDomain { var: v, value: val });
                    }
                }
            }
            let existing = merged.iter_mut().find(|m| {
                m.scope.len() == c.scope.len() && c.scope.iter().all(|v| m.scope.contains(v))
            });
            match existing {
                Some(m) => {
                    let other = c.reordered(&m.scope);
                    let (semantics, tuples) = match (m.semantics, c.semantics) {
                        (Semantics::Allows, Semantics::Allows) => {
                            (Semantics::Allows, m.tuples.intersection(&other).cloned().collect())
                        }
                        (Semantics::Forbids, Semantics::Forbids) => {
                            (Semantics::Forbids, m.tuples.union(&other).cloned().collect())
                        }
                        (Semantics::Allows, Semantics::Forbids) => {
                            (Semantics::Allows, m.tuples.difference(&other).cloned().collect())
                        }
                        (Semantics::Forbids, Semantics::Allows) => {
                            (Semantics::Allows, other.difference(&m.tuples).cloned().collect())
                        }
                    };
                    m.semantics = semantics;
                    m.tuples = tuples;
                }
                None => merged.push(c),
            }
        }
        Ok(Csp {
            variables,
            constraints: merged,
        })
    }

    pub fn variables(&self) -> &[CspVariable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[ExtensionalConstraint] {
        &self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn domain_size(&self, var: usize) -> usize {
        self.variables[var].domain.len()
    }

    pub fn is_binary(&self) -> bool {
        self.constraints.iter().all(|c| c.arity() == 2)
    }

    /// Errors with the first constraint that is not binary.
    pub fn require_binary(&self) -> Result<()> {
        match self.constraints.iter().position(|c| c.arity() != 2) {
            Some(k) => Err(Error::NonBinary {
                constraint: k,
                arity: self.constraints[k].arity(),
            }),
            None => Ok(()),
        }
    }

    /// Number of points in the product of all domains.
    pub fn domain_product(&self) -> u128 {
        self.variables
            .iter()
            .map(|v| v.domain.len() as u128)
            .try_fold(1u128, |acc, d| acc.checked_mul(d))
            .unwrap_or(u128::MAX)
    }
}

/// Current domains during propagation and search, as membership flags over
/// the original value order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DomainState {
    live: Vec<Vec<bool>>,
}

impl DomainState {
    pub fn full(p: &Csp) -> DomainState {
        DomainState {
            live: p.variables.iter().map(|v| vec![true; v.domain.len()]).collect(),
        }
    }

    pub fn contains(&self, var: usize, value: usize) -> bool {
        self.live[var][value]
    }

    /// Returns true if the value was present.
    pub fn remove(&mut self, var: usize, value: usize) -> bool {
        std::mem::replace(&mut self.live[var][value], false)
    }

    /// Restricts `var` to the single value.
    pub fn assign(&mut self, var: usize, value: usize) {
        for (i, b) in self.live[var].iter_mut().enumerate() {
            *b = *b && i == value;
        }
    }

    pub fn size(&self, var: usize) -> usize {
        self.live[var].iter().filter(|&&b| b).count()
    }

    pub fn values(&self, var: usize) -> impl Iterator<Item = usize> + '_ {
        self.live[var].iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn num_vars(&self) -> usize {
        self.live.len()
    }

    /// True iff some current domain is empty.
    pub fn is_wiped_out(&self) -> bool {
        self.live.iter().any(|d| !d.iter().any(|&b| b))
    }

    /// Set-wise inclusion of every domain.
    pub fn is_subset_of(&self, other: &DomainState) -> bool {
        self.live
            .iter()
            .zip(&other.live)
            .all(|(a, b)| a.iter().zip(b).all(|(&x, &y)| !x || y))
    }

    /// The single value of every variable, if all domains are singletons.
    pub fn singleton_values(&self) -> Option<Vec<usize>> {
        (0..self.live.len())
            .map(|v| {
                let mut it = self.values(v);
                match (it.next(), it.next()) {
                    (Some(a), None) => Some(a),
                    _ => None,
                }
            })
            .collect()
    }

    /// Values present in `self` but absent from `other`.
    pub fn removed_in(&self, other: &DomainState) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for (v, (a, b)) in self.live.iter().zip(&other.live).enumerate() {
            for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
                if x && !y {
                    out.insert((v, i));
                }
            }
        }
        out
    }
}

/// True iff the total assignment (one value index per variable) satisfies
/// every constraint.
pub fn check_solution(p: &Csp, solution: &[usize]) -> Result<bool> {
    if solution.len() != p.num_vars() {
        return Err(Error::Invalid(format!(
            "assignment covers {} of {} variables",
            solution.len(),
            p.num_vars()
        )));
    }
    for (var, &value) in solution.iter().enumerate() {
        if value >= p.domain_size(var) {
            return Err(Error::ValueOutOfDomain { var, value });
        }
    }
    let mut tuple = Vec::new();
    Ok(p.constraints.iter().all(|c| {
        tuple.clear();
        tuple.extend(c.scope.iter().map(|&v| solution[v]));
        c.allows(&tuple)
    }))
}
