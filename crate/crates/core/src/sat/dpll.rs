//! Chronological-backtracking DPLL with unit propagation at every node.

use super::{check_model, unit_propagate, Assignment, Cnf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Sat,
    Unsat,
}

impl Status {
    pub fn is_sat(self) -> bool {
        self == Status::Sat
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Sat => "sat",
            Status::Unsat => "unsat",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub decisions_total: u64,
    pub decisions_positive: u64,
    pub decisions_negative: u64,
    /// Search nodes visited, the root included.
    pub nodes: u64,
    /// Nodes at which unit propagation produced a conflict.
    pub failed_leaves: u64,
    /// Literals forced by unit propagation, summed over all nodes.
    pub propagations: u64,
    pub status: Status,
    pub model: Option<Assignment>,
}

/// Deterministic branching: a static variable order, the truth value tried
/// first for each variable, and optional selection groups.
///
/// A selection group is a set of variables of which one being true makes
/// branching on the others pointless (the selectors of one CSP variable in
/// the direct encoding). When groups are set, a variable is skipped once
/// another member of its group is true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPlan {
    order: Vec<u32>,
    first: Vec<bool>,
    groups: Option<Vec<Option<usize>>>,
    clause_guided: bool,
}

impl BranchPlan {
    /// Ascending variable index, positive polarity first.
    pub fn ascending(num_vars: u32) -> BranchPlan {
        BranchPlan::with_order((1..=num_vars).collect())
    }

    /// Positive-first plan over the given order.
    ///
    /// # Panics
    /// If `order` is not a permutation of `1..=order.len()`.
    pub fn with_order(order: Vec<u32>) -> BranchPlan {
        let n = order.len();
        let mut seen = vec![false; n + 1];
        for &v in &order {
            assert!(v >= 1 && (v as usize) <= n && !seen[v as usize], "branch order must be a permutation of 1..={n}");
            seen[v as usize] = true;
        }
        BranchPlan {
            order,
            first: vec![true; n + 1],
            groups: None,
            clause_guided: false,
        }
    }

    /// Dynamic plan: take the first literal of each clause that is not yet
    /// false, and branch on the first of these that is unassigned, making
    /// it true first. This is how a clause-by-clause search that picks
    /// literals in clause order looks from the variables' side: a clause
    /// whose first open literal is already true costs that search nothing.
    pub fn clause_guided(num_vars: u32) -> BranchPlan {
        BranchPlan {
            clause_guided: true,
            ..BranchPlan::ascending(num_vars)
        }
    }

    pub fn negative_first(mut self) -> BranchPlan {
        self.first.iter_mut().for_each(|b| *b = false);
        self
    }

    pub fn with_first_value(mut self, var: u32, value: bool) -> BranchPlan {
        self.first[var as usize] = value;
        self
    }

    pub fn with_selection_groups(mut self, groups: &[Vec<u32>]) -> BranchPlan {
        let mut map = vec![None; self.order.len() + 1];
        for (g, members) in groups.iter().enumerate() {
            for &v in members {
                map[v as usize] = Some(g);
            }
        }
        self.groups = Some(map);
        self
    }

    pub fn num_vars(&self) -> u32 {
        self.order.len() as u32
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn first_value(&self, var: u32) -> bool {
        self.first[var as usize]
    }

    fn pick(&self, a: &Assignment) -> Option<u32> {
        let blocked: Vec<usize> = match &self.groups {
            Some(groups) => a
                .iter()
                .filter(|&(_, b)| b)
                .filter_map(|(v, _)| groups[v as usize])
                .collect(),
            None => Vec::new(),
        };
        self.order.iter().copied().find(|&v| {
            a.get(v).is_none()
                && !self
                    .groups
                    .as_ref()
                    .and_then(|g| g[v as usize])
                    .is_some_and(|g| blocked.contains(&g))
        })
    }

    fn pick_any(&self, a: &Assignment) -> Option<u32> {
        self.order.iter().copied().find(|&v| a.get(v).is_none())
    }
}

/// Runs DPLL on `f` under `plan`.
///
/// At every node unit propagation runs first; a conflict is a failed leaf.
/// The search stops as soon as every clause is satisfied, completing the
/// model with `false` for untouched variables.
///
/// # Panics
/// If `plan` does not cover exactly the variables of `f`.
pub fn dp_solve(f: &Cnf, plan: &BranchPlan) -> SearchStats {
    assert_eq!(plan.num_vars(), f.num_vars(), "branch plan must cover every variable");
    let mut search = Dpll {
        f,
        plan,
        stats: SearchStats {
            decisions_total: 0,
            decisions_positive: 0,
            decisions_negative: 0,
            nodes: 0,
            failed_leaves: 0,
            propagations: 0,
            status: Status::Unsat,
            model: None,
        },
    };
    let model = search.node(&Assignment::new(f.num_vars()));
    let mut stats = search.stats;
    if let Some(m) = model {
        debug_assert!(check_model(f, &m).unwrap_or(false));
        stats.status = Status::Sat;
        stats.model = Some(m);
    }
    stats
}

struct Dpll<'a> {
    f: &'a Cnf,
    plan: &'a BranchPlan,
    stats: SearchStats,
}

impl Dpll<'_> {
    fn node(&mut self, a: &Assignment) -> Option<Assignment> {
        self.stats.nodes += 1;
        let prop = unit_propagate(self.f, a);
        self.stats.propagations += prop.forced.len() as u64;
        if prop.conflict {
            self.stats.failed_leaves += 1;
            return None;
        }
        let a = prop.assignment;
        if self.f.clauses().iter().all(|c| c.eval(&a) == Some(true)) {
            return Some(a.completed(false));
        }
        let guided = if self.plan.clause_guided {
            self.f
                .clauses()
                .iter()
                .filter_map(|c| c.lits().iter().find(|l| a.lit_value(**l) != Some(false)))
                .find(|l| a.lit_value(**l).is_none())
                .map(|l| (l.var(), l.polarity()))
        } else {
            None
        };
        let var = match guided.map(|g| g.0).or_else(|| self.plan.pick(&a)) {
            Some(v) => v,
            None => {
                let completed = a.completed(false);
                if check_model(self.f, &completed).unwrap_or(false) {
                    return Some(completed);
                }
                self.plan.pick_any(&a)?
            }
        };
        let first = guided.map_or_else(|| self.plan.first_value(var), |g| g.1);
        for value in [first, !first] {
            self.stats.decisions_total += 1;
            if value {
                self.stats.decisions_positive += 1;
            } else {
                self.stats.decisions_negative += 1;
            }
            let mut child = a.clone();
            child.set(var, value);
            if let Some(m) = self.node(&child) {
                return Some(m);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(num_vars: u32, clauses: &[&[i32]]) -> SearchStats {
        let f = Cnf::from_ints(num_vars, clauses).unwrap();
        dp_solve(&f, &BranchPlan::ascending(num_vars))
    }

    #[test]
    fn refuted_at_root() {
        let s = solve(1, &[&[1], &[-1]]);
        assert_eq!(s.status, Status::Unsat);
        assert_eq!(s.decisions_total, 0);
        assert_eq!(s.failed_leaves, 1);
        assert_eq!(s.nodes, 1);
    }

    #[test]
    fn first_branch_satisfies() {
        let s = solve(2, &[&[1, 2]]);
        assert_eq!(s.status, Status::Sat);
        assert_eq!(s.decisions_total, 1);
        assert_eq!(s.decisions_positive, 1);
    }

    #[test]
    fn all_four_binary_clauses() {
        // Hand trace: x1=T forces x2 by (-1 2) then (-1 -2) is false;
        // x1=F forces x2 by (1 2) then (1 -2) is false.
        let s = solve(2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        assert_eq!(s.status, Status::Unsat);
        assert_eq!(s.decisions_total, 2);
        assert_eq!(s.decisions_positive, 1);
        assert_eq!(s.decisions_negative, 1);
        assert_eq!(s.nodes, 3);
        assert_eq!(s.failed_leaves, 2);
        assert_eq!(s.propagations, 2);
    }

    #[test]
    fn empty_formula_is_sat() {
        let s = solve(3, &[]);
        assert_eq!(s.status, Status::Sat);
        assert_eq!(s.decisions_total, 0);
        assert!(s.model.unwrap().is_total());
    }

    #[test]
    fn empty_clause_is_unsat_at_root() {
        let s = solve(2, &[&[1, 2], &[]]);
        assert_eq!(s.status, Status::Unsat);
        assert_eq!(s.decisions_total, 0);
    }

    #[test]
    fn negative_first_plan() {
        let f = Cnf::from_ints(2, &[&[1, 2]]).unwrap();
        let s = dp_solve(&f, &BranchPlan::ascending(2).negative_first());
        assert_eq!(s.status, Status::Sat);
        // x1=F forces x2 by propagation.
        assert_eq!(s.decisions_total, 1);
        assert_eq!(s.decisions_negative, 1);
        assert_eq!(s.model.unwrap().get(2), Some(true));
    }

    #[test]
    fn selection_groups_skip_satisfied_groups() {
        // Selectors 1,2 for one variable and 3,4 for another; (-1 -3) forbids
        // the pair of first values.
        let f = Cnf::from_ints(4, &[&[1, 2], &[3, 4], &[-1, -3]]).unwrap();
        let plain = dp_solve(&f, &BranchPlan::ascending(4));
        let grouped = dp_solve(&f, &BranchPlan::ascending(4).with_selection_groups(&[vec![1, 2], vec![3, 4]]));
        assert_eq!(plain.status, Status::Sat);
        assert_eq!(grouped.status, Status::Sat);
        // Grouped: x1=T, propagation gives -3 then 4: done without branching on 2.
        assert_eq!(grouped.decisions_total, 1);
        assert!(check_model(&f, grouped.model.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn clause_guided_follows_first_open_literal() {
        let f = Cnf::from_ints(2, &[&[-1, 2], &[-1, -2]]).unwrap();
        let s = dp_solve(&f, &BranchPlan::clause_guided(2));
        assert_eq!(s.decisions_total, 1);
        // The literal -1 is made true: a negative decision, and no failure.
        assert_eq!(s.decisions_negative, 1);
        assert_eq!(s.failed_leaves, 0);
        assert_eq!(s.model.unwrap().get(1), Some(false));

        // After x1=T forces x3, the third clause is satisfied but its first
        // literal is still open, so x2=F is tried before the last clause
        // is looked at, and x4 is then forced.
        let f = Cnf::from_ints(4, &[&[1, 2], &[-1, 3], &[-2, 3], &[2, 4]]).unwrap();
        let s = dp_solve(&f, &BranchPlan::clause_guided(4));
        assert_eq!(s.status, Status::Sat);
        assert_eq!(s.decisions_total, 2);
        let m = s.model.unwrap();
        assert_eq!((m.get(1), m.get(2), m.get(4)), (Some(true), Some(false), Some(true)));
    }
}
