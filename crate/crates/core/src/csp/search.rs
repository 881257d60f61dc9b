//! d-way backtracking search with forward checking or maintained arc
//! consistency.

use super::propagate::BinaryNetwork;
use super::{check_solution, Csp, DomainState};
use crate::error::Result;
use crate::sat::Status;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspSearchStats {
    /// Value-assignment attempts.
    pub branches: u64,
    /// Search nodes visited, the root included.
    pub nodes: u64,
    /// Nodes whose propagation wiped out a domain.
    pub failed_leaves: u64,
    /// Revise (or forward-check) operations.
    pub revisions: u64,
    pub status: Status,
    pub solution: Option<Vec<usize>>,
}

/// Deterministic variable and value ordering for CSP search.
///
/// Variables are branched on in `var_order`; variables left out of it are
/// never chosen while they are singletons, and otherwise only after every
/// listed variable is assigned (ascending id). With `singleton_first`, an
/// unassigned listed variable whose current domain is a singleton is taken
/// before the static order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspBranchPlan {
    var_order: Vec<usize>,
    value_order: Vec<Vec<usize>>,
    singleton_first: bool,
}

impl CspBranchPlan {
    /// Ascending variable id, values in stored domain order.
    pub fn static_order(p: &Csp) -> CspBranchPlan {
        CspBranchPlan {
            var_order: (0..p.num_vars()).collect(),
            value_order: p.variables().iter().map(|v| (0..v.domain.len()).collect()).collect(),
            singleton_first: false,
        }
    }

    pub fn with_var_order(mut self, order: Vec<usize>) -> CspBranchPlan {
        self.var_order = order;
        self
    }

    /// # Panics
    /// If `order` is not a permutation of the variable's value indices.
    pub fn with_value_order(mut self, var: usize, order: Vec<usize>) -> CspBranchPlan {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..self.value_order[var].len()).collect::<Vec<_>>(), "value order must be a permutation");
        self.value_order[var] = order;
        self
    }

    pub fn singleton_first(mut self) -> CspBranchPlan {
        self.singleton_first = true;
        self
    }

    pub fn var_order(&self) -> &[usize] {
        &self.var_order
    }

    fn pick(&self, s: &DomainState, assigned: &[bool]) -> Option<usize> {
        let mut listed = self.var_order.iter().copied().filter(|&v| !assigned[v]);
        let chosen = if self.singleton_first {
            let mut listed_again = listed.clone();
            listed_again.find(|&v| s.size(v) == 1).or_else(|| listed.next())
        } else {
            listed.next()
        };
        chosen.or_else(|| (0..assigned.len()).find(|&v| !assigned[v] && s.size(v) > 1 && !self.var_order.contains(&v)))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    ForwardChecking,
    Mac,
}

/// Forward checking: after each assignment, prunes only the unassigned
/// neighbours of the variable just assigned. No propagation at the root.
pub fn fc_solve(p: &Csp, plan: &CspBranchPlan) -> Result<CspSearchStats> {
    solve(p, plan, Mode::ForwardChecking)
}

/// Maintaining arc consistency: AC at the root, then full AC-3 over the
/// remaining problem after every assignment.
pub fn mac_solve(p: &Csp, plan: &CspBranchPlan) -> Result<CspSearchStats> {
    solve(p, plan, Mode::Mac)
}

fn solve(p: &Csp, plan: &CspBranchPlan, mode: Mode) -> Result<CspSearchStats> {
    let net = BinaryNetwork::compile(p)?;
    let mut search = Search {
        p,
        net: &net,
        plan,
        mode,
        stats: CspSearchStats {
            branches: 0,
            nodes: 1,
            failed_leaves: 0,
            revisions: 0,
            status: Status::Unsat,
            solution: None,
        },
    };
    let mut state = DomainState::full(p);
    let consistent = match mode {
        Mode::ForwardChecking => !state.is_wiped_out(),
        Mode::Mac => {
            let (wipeout, revisions) = net.enforce(&mut state);
            search.stats.revisions += revisions;
            !wipeout
        }
    };
    let solution = if consistent {
        search.expand(&state, &vec![false; p.num_vars()])
    } else {
        search.stats.failed_leaves += 1;
        None
    };
    let mut stats = search.stats;
    if let Some(s) = solution {
        stats.status = Status::Sat;
        stats.solution = Some(s);
    }
    Ok(stats)
}

struct Search<'a> {
    p: &'a Csp,
    net: &'a BinaryNetwork,
    plan: &'a CspBranchPlan,
    mode: Mode,
    stats: CspSearchStats,
}

impl Search<'_> {
    fn expand(&mut self, state: &DomainState, assigned: &[bool]) -> Option<Vec<usize>> {
        let Some(var) = self.plan.pick(state, assigned) else {
            return self.terminal(state);
        };
        for &a in &self.plan.value_order[var] {
            if !state.contains(var, a) {
                continue;
            }
            self.stats.branches += 1;
            if let Some(sol) = self.child(state, assigned, var, a) {
                return Some(sol);
            }
        }
        None
    }

    fn child(&mut self, state: &DomainState, assigned: &[bool], var: usize, a: usize) -> Option<Vec<usize>> {
        self.stats.nodes += 1;
        let mut state = state.clone();
        let mut assigned = assigned.to_vec();
        state.assign(var, a);
        assigned[var] = true;
        let wipeout = match self.mode {
            Mode::ForwardChecking => self.forward_check(&mut state, &assigned, var, a),
            Mode::Mac => {
                let (wipeout, revisions) = self.net.enforce(&mut state);
                self.stats.revisions += revisions;
                wipeout
            }
        };
        if wipeout {
            self.stats.failed_leaves += 1;
            return None;
        }
        self.expand(&state, &assigned)
    }

    fn forward_check(&mut self, state: &mut DomainState, assigned: &[bool], var: usize, a: usize) -> bool {
        for (k, w) in self.net.neighbours(var) {
            if assigned[w] {
                continue;
            }
            self.stats.revisions += 1;
            for b in 0..self.p.domain_size(w) {
                if state.contains(w, b) && !self.net.compatible(k, var, a, b) {
                    state.remove(w, b);
                }
            }
            if state.size(w) == 0 {
                return true;
            }
        }
        false
    }

    fn terminal(&mut self, state: &DomainState) -> Option<Vec<usize>> {
        match state.singleton_values() {
            Some(sol) if check_solution(self.p, &sol).unwrap_or(false) => Some(sol),
            _ => {
                self.stats.failed_leaves += 1;
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{CspVariable, ExtensionalConstraint};
    use super::*;

    #[test]
    fn fc_not_equal() {
        let p = not_equal(2);
        let s = fc_solve(&p, &CspBranchPlan::static_order(&p)).unwrap();
        assert_eq!(s.status, Status::Sat);
        assert_eq!(s.solution, Some(vec![0, 1]));
        assert_eq!(s.branches, 2);
        assert_eq!(s.failed_leaves, 0);
    }

    #[test]
    fn fc_singleton_conflict() {
        // Hand trace: X=1 forward-checks Y, whose only value is removed.
        let p = not_equal(1);
        let s = fc_solve(&p, &CspBranchPlan::static_order(&p)).unwrap();
        assert_eq!(s.status, Status::Unsat);
        assert_eq!(s.branches, 1);
        assert_eq!(s.failed_leaves, 1);
        assert_eq!(s.nodes, 2);
    }

    #[test]
    fn fc_without_constraints() {
        let p = Csp::new((0..4).map(|i| CspVariable::range(i, 3)).collect(), vec![]).unwrap();
        let s = fc_solve(&p, &CspBranchPlan::static_order(&p)).unwrap();
        assert_eq!(s.status, Status::Sat);
        assert_eq!(s.branches, 4);
    }

    #[test]
    fn mac_root_singletons() {
        let p = Csp::new(
            (0..3).map(|i| CspVariable::range(i, 3)).collect(),
            vec![less_than(0, 1, 3), less_than(1, 2, 3)],
        )
        .unwrap();
        let s = mac_solve(&p, &CspBranchPlan::static_order(&p)).unwrap();
        assert_eq!(s.status, Status::Sat);
        assert_eq!(s.solution, Some(vec![0, 1, 2]));
        assert_eq!(s.branches, 3);
        assert_eq!(s.failed_leaves, 0);
    }

    #[test]
    fn mac_root_wipeout() {
        let p = not_equal(1);
        let s = mac_solve(&p, &CspBranchPlan::static_order(&p)).unwrap();
        assert_eq!(s.status, Status::Unsat);
        assert_eq!(s.branches, 0);
        assert_eq!(s.failed_leaves, 1);
    }

    #[test]
    fn solvers_reject_non_binary() {
        let p = Csp::new(
            (0..3).map(|i| CspVariable::range(i, 2)).collect(),
            vec![ExtensionalConstraint::forbids_tuples(vec![0, 1, 2], [vec![0, 0, 0]])],
        )
        .unwrap();
        assert!(fc_solve(&p, &CspBranchPlan::static_order(&p)).is_err());
        assert!(mac_solve(&p, &CspBranchPlan::static_order(&p)).is_err());
    }

    #[test]
    fn pigeonhole_three_into_two() {
        let vars: Vec<_> = (0..3).map(|i| CspVariable::range(i, 2)).collect();
        let ne = |x, y| ExtensionalConstraint::forbids_tuples(vec![x, y], [vec![0, 0], vec![1, 1]]);
        let p = Csp::new(vars, vec![ne(0, 1), ne(0, 2), ne(1, 2)]).unwrap();
        let plan = CspBranchPlan::static_order(&p);
        let fc = fc_solve(&p, &plan).unwrap();
        let mac = mac_solve(&p, &plan).unwrap();
        assert_eq!(fc.status, Status::Unsat);
        assert_eq!(mac.status, Status::Unsat);
        // X=1 leaves Y={2}, Z={2}; Y=2 wipes Z. Symmetric for X=2.
        assert_eq!(fc.branches, 4);
        assert_eq!(fc.failed_leaves, 2);
        // MAC: X=1 makes Y and Z singletons that conflict.
        assert_eq!(mac.branches, 2);
        assert_eq!(mac.failed_leaves, 2);
    }

    #[test]
    fn restricted_branch_set_completes_singletons() {
        let p = Csp::new(
            vec![CspVariable::range(0, 2), CspVariable::range(1, 2)],
            vec![less_than(0, 1, 2)],
        )
        .unwrap();
        let plan = CspBranchPlan::static_order(&p).with_var_order(vec![0]);
        let s = mac_solve(&p, &plan).unwrap();
        assert_eq!(s.status, Status::Sat);
        assert_eq!(s.branches, 1);
        assert_eq!(s.solution, Some(vec![0, 1]));
    }
}
