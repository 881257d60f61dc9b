//! Arc consistency (AC-3) for binary constraints and generalized arc
//! consistency for constraints of any arity.

use std::collections::{BTreeSet, VecDeque};

use super::{Csp, DomainState, Semantics};
use crate::error::Result;

/// Outcome of a consistency closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pruning {
    pub state: DomainState,
    pub wipeout: bool,
    /// Values removed relative to the input state. On wipeout this holds the
    /// removals made up to the moment the empty domain appeared.
    pub pruned: BTreeSet<(usize, usize)>,
    pub revisions: u64,
}

/// Binary constraints compiled to dense support tables.
#[derive(Clone, Debug)]
pub(crate) struct BinaryNetwork {
    arcs: Vec<BinaryConstraint>,
    /// Per variable: `(constraint, side)` in constraint order, where `side`
    /// is the variable's position in the scope.
    incident: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug)]
struct BinaryConstraint {
    x: usize,
    y: usize,
    dy: usize,
    table: Vec<bool>,
}

impl BinaryConstraint {
    fn allowed(&self, a: usize, b: usize) -> bool {
        self.table[a * self.dy + b]
    }
}

impl BinaryNetwork {
    pub(crate) fn compile(p: &Csp) -> Result<BinaryNetwork> {
        p.require_binary()?;
        let mut incident = vec![Vec::new(); p.num_vars()];
        let mut arcs = Vec::with_capacity(p.constraints().len());
        for (k, c) in p.constraints().iter().enumerate() {
            let (x, y) = (c.scope()[0], c.scope()[1]);
            let (dx, dy) = (p.domain_size(x), p.domain_size(y));
            let mut table = vec![c.semantics() == Semantics::Forbids; dx * dy];
            for t in c.tuples() {
                table[t[0] * dy + t[1]] = c.semantics() == Semantics::Allows;
            }
            arcs.push(BinaryConstraint { x, y, dy, table });
            incident[x].push((k, 0));
            incident[y].push((k, 1));
        }
        Ok(BinaryNetwork { arcs, incident })
    }

    /// Neighbours of `var` with the connecting constraint, in constraint order.
    pub(crate) fn neighbours(&self, var: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.incident[var].iter().map(move |&(k, side)| {
            let c = &self.arcs[k];
            (k, if side == 0 { c.y } else { c.x })
        })
    }

    /// Whether `var = a` and `other = b` are compatible under constraint `k`.
    pub(crate) fn compatible(&self, k: usize, var: usize, a: usize, b: usize) -> bool {
        let c = &self.arcs[k];
        if c.x == var {
            c.allowed(a, b)
        } else {
            c.allowed(b, a)
        }
    }

    /// Removes from `target` the values with no support in `source` under
    /// constraint `k`. Returns whether anything was removed.
    fn revise(&self, k: usize, target_side: usize, s: &mut DomainState) -> bool {
        let c = &self.arcs[k];
        let (target, source) = if target_side == 0 { (c.x, c.y) } else { (c.y, c.x) };
        let mut changed = false;
        for a in 0..s.live[target].len() {
            if !s.live[target][a] {
                continue;
            }
            let supported = s.live[source].iter().enumerate().any(|(b, &live)| {
                live && if target_side == 0 { c.allowed(a, b) } else { c.allowed(b, a) }
            });
            if !supported {
                s.live[target][a] = false;
                changed = true;
            }
        }
        changed
    }

    /// AC-3 to fixpoint in place. The queue starts with both arcs of every
    /// constraint in constraint order and is processed FIFO. Returns
    /// `(wipeout, revisions)`.
    pub(crate) fn enforce(&self, s: &mut DomainState) -> (bool, u64) {
        if s.is_wiped_out() {
            return (true, 0);
        }
        let mut queue: VecDeque<(usize, usize)> = VecDeque::with_capacity(2 * self.arcs.len());
        let mut queued = vec![[true; 2]; self.arcs.len()];
        for k in 0..self.arcs.len() {
            queue.extend([(k, 0), (k, 1)]);
        }
        let mut revisions = 0;
        while let Some((k, side)) = queue.pop_front() {
            queued[k][side] = false;
            revisions += 1;
            if !self.revise(k, side, s) {
                continue;
            }
            let c = &self.arcs[k];
            let target = if side == 0 { c.x } else { c.y };
            if s.size(target) == 0 {
                return (true, revisions);
            }
            for &(k2, side2) in &self.incident[target] {
                if k2 == k {
                    continue;
                }
                // Revise the other end of k2 against `target`.
                let other_side = 1 - side2;
                if !queued[k2][other_side] {
                    queued[k2][other_side] = true;
                    queue.push_back((k2, other_side));
                }
            }
        }
        (false, revisions)
    }
}

/// AC-3 closure of `s` under the binary constraints of `p`.
///
/// Fails with [`crate::Error::NonBinary`] if any constraint is not binary;
/// use [`gac`] for those.
pub fn ac3(p: &Csp, s: &DomainState) -> Result<Pruning> {
    let net = BinaryNetwork::compile(p)?;
    let mut state = s.clone();
    let (wipeout, revisions) = net.enforce(&mut state);
    Ok(Pruning {
        pruned: s.removed_in(&state),
        state,
        wipeout,
        revisions,
    })
}

/// Generalized arc consistency for constraints of any arity.
///
/// A value survives iff, in every constraint on its variable, some tuple
/// over current domains containing it is permitted. For forbids-semantics
/// constraints that is decided by counting: the value is supported iff the
/// live sub-product through it is larger than the number of live forbidden
/// tuples through it.
pub fn gac(p: &Csp, s: &DomainState) -> Pruning {
    let mut state = s.clone();
    let mut revisions = 0;
    if state.is_wiped_out() {
        return Pruning {
            pruned: BTreeSet::new(),
            state,
            wipeout: true,
            revisions,
        };
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); p.num_vars()];
    let mut queue = VecDeque::new();
    let mut queued: Vec<Vec<bool>> = Vec::with_capacity(p.constraints().len());
    for (k, c) in p.constraints().iter().enumerate() {
        for (pos, &v) in c.scope().iter().enumerate() {
            incident[v].push(k);
            queue.push_back((k, pos));
        }
        queued.push(vec![true; c.arity()]);
    }
    while let Some((k, pos)) = queue.pop_front() {
        queued[k][pos] = false;
        revisions += 1;
        let c = &p.constraints()[k];
        let var = c.scope()[pos];
        let mut changed = false;
        for a in 0..state.live[var].len() {
            if state.live[var][a] && !has_support(p, k, pos, a, &state) {
                state.live[var][a] = false;
                changed = true;
            }
        }
        if !changed {
            continue;
        }
        if state.size(var) == 0 {
            return Pruning {
                pruned: s.removed_in(&state),
                state,
                wipeout: true,
                revisions,
            };
        }
        for &k2 in &incident[var] {
            if k2 == k {
                continue;
            }
            for (pos2, &w) in p.constraints()[k2].scope().iter().enumerate() {
                if w != var && !queued[k2][pos2] {
                    queued[k2][pos2] = true;
                    queue.push_back((k2, pos2));
                }
            }
        }
    }
    Pruning {
        pruned: s.removed_in(&state),
        state,
        wipeout: false,
        revisions,
    }
}

fn has_support(p: &Csp, k: usize, pos: usize, a: usize, s: &DomainState) -> bool {
    let c = &p.constraints()[k];
    let live_tuple = |t: &Vec<usize>| {
        t[pos] == a && c.scope().iter().zip(t).all(|(&v, &val)| s.contains(v, val))
    };
    match c.semantics() {
        Semantics::Allows => c.tuples().iter().any(live_tuple),
        Semantics::Forbids => {
            let product = c
                .scope()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pos)
                .map(|(_, &v)| s.size(v) as u128)
                .product::<u128>();
            let forbidden = c.tuples().iter().filter(|t| live_tuple(t)).count() as u128;
            product > forbidden
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{CspVariable, ExtensionalConstraint};
    use super::*;
    use crate::Error;

    fn bool_vars(n: usize) -> Vec<CspVariable> {
        (0..n).map(|i| CspVariable::new(i, ["F", "T"])).collect()
    }

    #[test]
    fn unique_supports_prune() {
        let p = Csp::new(
            vec![CspVariable::range(0, 2), CspVariable::range(1, 2)],
            vec![less_than(0, 1, 2)],
        )
        .unwrap();
        let r = ac3(&p, &DomainState::full(&p)).unwrap();
        assert!(!r.wipeout);
        assert_eq!(r.pruned, BTreeSet::from([(0, 1), (1, 0)]));
        assert_eq!(r.state.values(0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(r.state.values(1).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn forbidden_only_pair_wipes_out() {
        let r = ac3(&not_equal(1), &DomainState::full(&not_equal(1))).unwrap();
        assert!(r.wipeout);
        assert!(r.state.is_wiped_out());
    }

    #[test]
    fn fully_supported_values_survive() {
        let p = Csp::new(
            vec![CspVariable::range(0, 2), CspVariable::range(1, 2)],
            vec![ExtensionalConstraint::allows_tuples(vec![0, 1], [vec![0, 0], vec![1, 1]])],
        )
        .unwrap();
        let r = ac3(&p, &DomainState::full(&p)).unwrap();
        assert!(!r.wipeout);
        assert!(r.pruned.is_empty());
    }

    #[test]
    fn ac3_rejects_non_binary() {
        let p = Csp::new(bool_vars(3), vec![ExtensionalConstraint::forbids_tuples(vec![0, 1, 2], [])]).unwrap();
        assert!(matches!(ac3(&p, &DomainState::full(&p)), Err(Error::NonBinary { constraint: 0, arity: 3 })));
    }

    #[test]
    fn clause_constraint_needs_no_pruning() {
        // (x or not y or z): the falsifying tuple is (F, T, F).
        let p = Csp::new(bool_vars(3), vec![ExtensionalConstraint::forbids_tuples(vec![0, 1, 2], [vec![0, 1, 0]])])
            .unwrap();
        let r = gac(&p, &DomainState::full(&p));
        assert!(!r.wipeout);
        assert!(r.pruned.is_empty());
    }

    #[test]
    fn clause_constraint_mimics_unit_propagation() {
        let p = Csp::new(bool_vars(3), vec![ExtensionalConstraint::forbids_tuples(vec![0, 1, 2], [vec![0, 1, 0]])])
            .unwrap();
        let mut s = DomainState::full(&p);
        s.assign(1, 1);
        s.assign(2, 0);
        let r = gac(&p, &s);
        assert!(!r.wipeout);
        assert_eq!(r.pruned, BTreeSet::from([(0, 0)]));
    }

    #[test]
    fn chain_propagates_through_queue() {
        let p = Csp::new(
            (0..3).map(|i| CspVariable::range(i, 3)).collect(),
            vec![less_than(0, 1, 3), less_than(1, 2, 3)],
        )
        .unwrap();
        let r = ac3(&p, &DomainState::full(&p)).unwrap();
        assert_eq!(r.state.singleton_values(), Some(vec![0, 1, 2]));
        assert_eq!(gac(&p, &DomainState::full(&p)).state, r.state);
    }
}
