//! Per-instance evaluation of each claim under the matched-heuristic
//! contract.
//!
//! Every claim compares a left and a right procedure by a cost where lower
//! is stronger: the branch metric for search claims, and 0 for "conflict
//! found" versus 1 for "no conflict" for propagation claims.

use std::collections::BTreeSet;

use super::{ClaimId, Convention, PolarityRule};
use crate::csp::{ac3, fc_solve, mac_solve, Csp, CspBranchPlan, CspSearchStats, DomainState, Pruning};
use crate::csp2sat::{encode_direct, encode_log, encode_support};
use crate::encoding::{Amo, EncodingMap};
use crate::error::Result;
use crate::sat::{dp_solve, unit_propagate, Assignment, BranchPlan, Cnf, Propagation, SearchStats};
use crate::sat2csp::{encode_dual, encode_hidden, encode_literal};

/// One compared instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Sample {
    pub lhs: u64,
    pub rhs: u64,
    /// A failed side condition (pruned-set correspondence), if any.
    pub problem: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Eval {
    /// Metric undefined: both sides decided the instance at the root.
    Degenerate,
    Sample(Sample),
}

fn cost(conflict: bool) -> u64 {
    u64::from(!conflict)
}

fn sample(lhs: u64, rhs: u64, problem: Option<String>) -> Eval {
    Eval::Sample(Sample { lhs, rhs, problem })
}

// Matched plans.

/// The static order shared by every SAT-side claim: variables by first
/// occurrence in clause order, positive polarity first.
pub fn dp_plan(f: &Cnf) -> BranchPlan {
    BranchPlan::with_order(f.first_occurrence_order())
}

/// Clause variables in clause order, satisfying tuples with `T` before `F`
/// so that value order mirrors positive-first branching.
pub fn dual_plan(p: &Csp) -> CspBranchPlan {
    (0..p.num_vars()).fold(CspBranchPlan::static_order(p), |plan, v| {
        plan.with_value_order(v, (0..p.domain_size(v)).rev().collect())
    })
}

/// Propositional variables only, in the DP order, `T` first. Dual variables
/// are never branched on.
pub fn hidden_plan(f: &Cnf, p: &Csp, map: &EncodingMap) -> CspBranchPlan {
    let order: Vec<usize> = f
        .first_occurrence_order()
        .into_iter()
        .map(|v| map.csp_var_of_prop(v).expect("every variable is mapped"))
        .collect();
    order
        .iter()
        .fold(CspBranchPlan::static_order(p), |plan, &v| {
            let values = (0..p.domain_size(v)).rev().collect();
            plan.with_value_order(v, values)
        })
        .with_var_order(order)
}

/// Clause variables in clause order, literals in clause order.
pub fn literal_plan(p: &Csp) -> CspBranchPlan {
    CspBranchPlan::static_order(p)
}

/// DP's counterpart of [`literal_plan`]: choosing literal `l` for a clause
/// becomes setting `l` true, and trying the clause's next value becomes
/// the `l = false` branch, so DP follows the first open clause.
pub fn dp_literal_plan(f: &Cnf) -> BranchPlan {
    BranchPlan::clause_guided(f.num_vars())
}

/// Selectors in `(variable, value)` order, positive first. Under the
/// value-selection rule a CSP variable's remaining selectors are skipped
/// once one of them is true.
pub fn direct_plan(f: &Cnf, map: &EncodingMap, rule: PolarityRule) -> BranchPlan {
    let plan = BranchPlan::ascending(f.num_vars());
    match rule {
        PolarityRule::PositiveFirst => plan,
        PolarityRule::ValueSelection => plan.with_selection_groups(&map.selector_groups()),
    }
}

/// Bits of each CSP variable from most to least significant, false first,
/// so values are tried in ascending index order.
pub fn log_plan(map: &EncodingMap) -> BranchPlan {
    let order = map.bits.iter().flat_map(|b| b.sat_vars.iter().rev().copied()).collect();
    BranchPlan::with_order(order).negative_first()
}

/// Forward checking on the original problem: static order, with singleton
/// domains assigned first (the counterpart of unit propagation).
pub fn fc_plan(p: &Csp) -> CspBranchPlan {
    CspBranchPlan::static_order(p).singleton_first()
}

pub fn mac_plan(p: &Csp) -> CspBranchPlan {
    CspBranchPlan::static_order(p)
}

// Shared helpers.

pub(crate) fn up_root(f: &Cnf) -> Propagation {
    unit_propagate(f, &Assignment::new(f.num_vars()))
}

fn ac_root(p: &Csp) -> Result<Pruning> {
    ac3(p, &DomainState::full(p))
}

/// CSP values whose selector unit propagation set false.
fn removed_by_selectors(map: &EncodingMap, a: &Assignment) -> BTreeSet<(usize, usize)> {
    map.selectors
        .iter()
        .filter(|s| a.get(s.sat_var) == Some(false))
        .map(|s| (s.csp_var, s.value))
        .collect()
}

/// CSP values whose bit pattern contradicts a bit unit propagation fixed.
fn removed_by_bits(map: &EncodingMap, a: &Assignment) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for link in &map.bits {
        for value in 0..link.domain_size {
            let clash = link
                .sat_vars
                .iter()
                .enumerate()
                .any(|(i, &x)| a.get(x).is_some_and(|b| b != (value >> i & 1 == 1)));
            if clash {
                out.insert((link.csp_var, value));
            }
        }
    }
    out
}

fn degenerate(dp: &SearchStats, csp: &CspSearchStats) -> bool {
    dp.decisions_total == 0 && csp.branches == 0
}

fn show(set: &BTreeSet<(usize, usize)>) -> String {
    let items: Vec<String> = set.iter().map(|(v, a)| format!("x{v}={}", a + 1)).collect();
    format!("{{{}}}", items.join(", "))
}

// SAT-side claims.

pub(crate) fn eval_sat(claim: ClaimId, f: &Cnf, conv: Convention) -> Result<Eval> {
    match claim {
        ClaimId::T1 => t1(f),
        ClaimId::T2 => t2(f),
        ClaimId::T3 => {
            let up = up_root(f);
            let (p, _) = encode_literal(f)?;
            Ok(sample(cost(ac_root(&p)?.wipeout), cost(up.conflict), None))
        }
        ClaimId::T4 => {
            let dp = dp_solve(f, &dp_plan(f));
            let (p, _) = encode_dual(f)?;
            let fc = fc_solve(&p, &dual_plan(&p))?;
            Ok(compare_dp_first(conv, &dp, &fc))
        }
        ClaimId::T5 => {
            let dp = dp_solve(f, &dp_plan(f));
            let (p, _) = encode_dual(f)?;
            let mac = mac_solve(&p, &dual_plan(&p))?;
            Ok(compare_dp_first(conv, &dp, &mac))
        }
        ClaimId::T6 => {
            let dp = dp_solve(f, &dp_plan(f));
            let (p, map) = encode_hidden(f)?;
            let mac = mac_solve(&p, &hidden_plan(f, &p, &map))?;
            Ok(compare_dp_first(conv, &dp, &mac))
        }
        ClaimId::T7 => {
            let dp = dp_solve(f, &dp_literal_plan(f));
            let (p, _) = encode_literal(f)?;
            let mac = mac_solve(&p, &literal_plan(&p))?;
            Ok(compare_dp_first(conv, &dp, &mac))
        }
        other => unreachable!("{other} is not a SAT-side claim"),
    }
}

fn compare_dp_first(conv: Convention, dp: &SearchStats, csp: &CspSearchStats) -> Eval {
    if degenerate(dp, csp) {
        Eval::Degenerate
    } else {
        sample(conv.dp(dp), conv.csp(csp), None)
    }
}

fn compare_csp_first(conv: Convention, csp: &CspSearchStats, dp: &SearchStats) -> Eval {
    if degenerate(dp, csp) {
        Eval::Degenerate
    } else {
        sample(conv.csp(csp), conv.dp(dp), None)
    }
}

/// AC on the dual encoding versus unit propagation. Beyond conflicts, every
/// forced literal must have pruned the opposite value from each dual
/// variable that mentions its variable.
fn t1(f: &Cnf) -> Result<Eval> {
    let up = up_root(f);
    let (p, map) = encode_dual(f)?;
    let ac = ac_root(&p)?;
    let mut problem = None;
    if !up.conflict && !ac.wipeout {
        'outer: for (v, b) in up.assignment.iter() {
            for link in &map.clauses {
                let Some(pos) = link.coords.iter().position(|&c| c == v as i32) else { continue };
                for (a, label) in p.variables()[link.csp_var].domain.iter().enumerate() {
                    let coord = label.as_bytes()[pos] == b'T';
                    if coord != b && ac.state.contains(link.csp_var, a) {
                        problem = Some(format!(
                            "x{v}={} is forced but dual value {label} of clause {} survives",
                            b, link.clause
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(sample(cost(ac.wipeout), cost(up.conflict), problem))
}

/// AC on the hidden encoding versus unit propagation, with the forced
/// literals matching exactly the pruned propositional values.
fn t2(f: &Cnf) -> Result<Eval> {
    let up = up_root(f);
    let (p, map) = encode_hidden(f)?;
    let ac = ac_root(&p)?;
    let mut problem = None;
    if !up.conflict && !ac.wipeout {
        let forced: BTreeSet<(usize, usize)> = up
            .assignment
            .iter()
            .map(|(v, b)| (map.csp_var_of_prop(v).expect("mapped"), usize::from(!b)))
            .collect();
        let props: BTreeSet<usize> = map.props.iter().map(|l| l.csp_var).collect();
        let pruned: BTreeSet<(usize, usize)> = ac.pruned.iter().copied().filter(|(v, _)| props.contains(v)).collect();
        if forced != pruned {
            problem = Some(format!("forced literals give {} but AC pruned {}", show(&forced), show(&pruned)));
        }
    }
    Ok(sample(cost(ac.wipeout), cost(up.conflict), problem))
}

// CSP-side claims.

pub(crate) fn eval_csp(claim: ClaimId, p: &Csp, conv: Convention, amo: Amo) -> Result<Eval> {
    match claim {
        ClaimId::T8Log => {
            let (fd, md) = encode_direct(p, amo)?;
            let (fl, ml) = encode_log(p)?;
            let (ud, ul) = (up_root(&fd), up_root(&fl));
            let mut problem = None;
            if !ud.conflict && !ul.conflict {
                let (rd, rl) = (removed_by_selectors(&md, &ud.assignment), removed_by_bits(&ml, &ul.assignment));
                if !rl.is_subset(&rd) {
                    problem = Some(format!("log UP removed {} but direct UP removed {}", show(&rl), show(&rd)));
                }
            }
            Ok(sample(cost(ud.conflict), cost(ul.conflict), problem))
        }
        ClaimId::T8Ac => {
            let (fd, md) = encode_direct(p, amo)?;
            let ud = up_root(&fd);
            let ac = ac_root(p)?;
            let mut problem = None;
            if !ud.conflict && !ac.wipeout {
                let rd = removed_by_selectors(&md, &ud.assignment);
                if !rd.is_subset(&ac.pruned) {
                    problem = Some(format!("direct UP removed {} but AC pruned {}", show(&rd), show(&ac.pruned)));
                }
            }
            Ok(sample(cost(ac.wipeout), cost(ud.conflict), problem))
        }
        ClaimId::T9Fc => {
            let (fd, md) = encode_direct(p, amo)?;
            let dp = dp_solve(&fd, &direct_plan(&fd, &md, conv.polarity));
            let fc = fc_solve(p, &fc_plan(p))?;
            Ok(compare_dp_first(conv, &dp, &fc))
        }
        ClaimId::T9Mac => {
            let (fd, md) = encode_direct(p, amo)?;
            let dp = dp_solve(&fd, &direct_plan(&fd, &md, conv.polarity));
            let mac = mac_solve(p, &mac_plan(p))?;
            Ok(compare_csp_first(conv, &mac, &dp))
        }
        ClaimId::T10Fc => {
            let (fl, ml) = encode_log(p)?;
            let dp = dp_solve(&fl, &log_plan(&ml));
            let fc = fc_solve(p, &fc_plan(p))?;
            Ok(compare_csp_first(conv, &fc, &dp))
        }
        ClaimId::T10Mac => {
            let (fl, ml) = encode_log(p)?;
            let dp = dp_solve(&fl, &log_plan(&ml));
            let mac = mac_solve(p, &mac_plan(p))?;
            Ok(compare_csp_first(conv, &mac, &dp))
        }
        ClaimId::S1 => {
            let (fs, ms) = encode_support(p)?;
            let us = up_root(&fs);
            let ac = ac_root(p)?;
            let mut problem = None;
            if !us.conflict && !ac.wipeout {
                let rs = removed_by_selectors(&ms, &us.assignment);
                if rs != ac.pruned {
                    problem = Some(format!("support UP removed {} but AC pruned {}", show(&rs), show(&ac.pruned)));
                }
            }
            Ok(sample(cost(us.conflict), cost(ac.wipeout), problem))
        }
        other => unreachable!("{other} is not a CSP-side claim"),
    }
}
