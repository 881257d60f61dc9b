//! Encodings of CSPs as CNF formulas: direct, log and support.
//!
//! Clause layout is fixed: per-variable clauses (at-least-one, exclusion)
//! in variable order, then at-most-one clauses, then constraint clauses in
//! constraint order, each constraint's tuples in lexicographic order.

use itertools::Itertools;

use crate::csp::{Csp, Semantics};
use crate::encoding::{Amo, BitLink, Encoding, EncodingMap, SelectorLink};
use crate::error::{Error, Result};
use crate::sat::{Assignment, Clause, Cnf, Lit};

/// Largest domain product an allows-constraint may have before its
/// complement is refused.
pub const DEFAULT_TUPLE_BUDGET: u128 = 1_000_000;

/// Forbidden tuples of constraint `k`, complementing allows-constraints.
fn forbidden_tuples(p: &Csp, k: usize, budget: u128) -> Result<Vec<Vec<usize>>> {
    let c = &p.constraints()[k];
    match c.semantics() {
        Semantics::Forbids => Ok(c.tuples().iter().cloned().collect()),
        Semantics::Allows => {
            let tuples = c.scope().iter().map(|&v| p.domain_size(v) as u128).product::<u128>();
            if tuples > budget {
                return Err(Error::TupleBudget {
                    constraint: k,
                    tuples,
                    budget,
                });
            }
            Ok(c.scope()
                .iter()
                .map(|&v| 0..p.domain_size(v))
                .multi_cartesian_product()
                .filter(|t| !c.tuples().contains(t))
                .collect())
        }
    }
}

/// Selector variables numbered variable-major from 1.
fn selectors(p: &Csp, map: &mut EncodingMap) -> Vec<Vec<u32>> {
    let mut next = 0u32;
    let mut out = Vec::with_capacity(p.num_vars());
    for v in 0..p.num_vars() {
        let vars: Vec<u32> = (0..p.domain_size(v))
            .map(|value| {
                next += 1;
                map.selectors.push(SelectorLink {
                    csp_var: v,
                    value,
                    sat_var: next,
                });
                next
            })
            .collect();
        out.push(vars);
    }
    out
}

fn alo(sel: &[Vec<u32>], clauses: &mut Vec<Clause>) {
    for vars in sel {
        clauses.push(Clause::new(vars.iter().map(|&x| Lit::new(x, true))));
    }
}

fn amo_pairwise(sel: &[Vec<u32>], clauses: &mut Vec<Clause>) {
    for vars in sel {
        for (&a, &b) in vars.iter().tuple_combinations() {
            clauses.push(Clause::new([Lit::new(a, false), Lit::new(b, false)]));
        }
    }
}

fn total_vars(sel: &[Vec<u32>]) -> u32 {
    sel.iter().map(|v| v.len() as u32).sum()
}

/// Direct encoding with the default tuple budget.
pub fn encode_direct(p: &Csp, amo: Amo) -> Result<(Cnf, EncodingMap)> {
    encode_direct_with_budget(p, amo, DEFAULT_TUPLE_BUDGET)
}

/// One selector per `(variable, value)`. Clauses: an at-least-one clause
/// per variable, then one conflict clause per forbidden tuple in constraint
/// order, then the optional pairwise at-most-one clauses. Works for
/// constraints of any arity.
pub fn encode_direct_with_budget(p: &Csp, amo: Amo, budget: u128) -> Result<(Cnf, EncodingMap)> {
    let mut map = EncodingMap::new(Encoding::Direct, p.num_vars());
    map.amo = Some(amo);
    let sel = selectors(p, &mut map);
    let mut clauses = Vec::new();
    alo(&sel, &mut clauses);
    for (k, c) in p.constraints().iter().enumerate() {
        for t in forbidden_tuples(p, k, budget)? {
            clauses.push(Clause::new(c.scope().iter().zip(&t).map(|(&v, &a)| Lit::new(sel[v][a], false))));
        }
    }
    if amo == Amo::Pairwise {
        amo_pairwise(&sel, &mut clauses);
    }
    Ok((Cnf::new(total_vars(&sel), clauses)?, map))
}

/// Bits needed for a domain of size `d`; a singleton needs none.
pub fn log_width(d: usize) -> usize {
    if d <= 1 {
        0
    } else {
        (usize::BITS - (d - 1).leading_zeros()) as usize
    }
}

/// Clause excluding value index `a` of a variable with bits `bits`.
fn exclude(bits: &[u32], a: usize) -> impl Iterator<Item = Lit> + '_ {
    bits.iter().enumerate().map(move |(i, &b)| Lit::new(b, a >> i & 1 == 0))
}

/// `ceil(log2 d)` bits per variable, least significant first. Indices
/// beyond the domain are excluded, an empty domain becomes the empty
/// clause, and each forbidden tuple is excluded bitwise.
pub fn encode_log(p: &Csp) -> Result<(Cnf, EncodingMap)> {
    encode_log_with_budget(p, DEFAULT_TUPLE_BUDGET)
}

pub fn encode_log_with_budget(p: &Csp, budget: u128) -> Result<(Cnf, EncodingMap)> {
    let mut map = EncodingMap::new(Encoding::Log, p.num_vars());
    let mut next = 0u32;
    let mut bits = Vec::with_capacity(p.num_vars());
    for v in 0..p.num_vars() {
        let d = p.domain_size(v);
        let vars: Vec<u32> = (0..log_width(d) as u32).map(|i| next + i + 1).collect();
        next += vars.len() as u32;
        map.bits.push(BitLink {
            csp_var: v,
            domain_size: d,
            sat_vars: vars.clone(),
        });
        bits.push(vars);
    }
    let mut clauses = Vec::new();
    for (v, vars) in bits.iter().enumerate() {
        let d = p.domain_size(v);
        if d == 0 {
            clauses.push(Clause::new([]));
        }
        for a in d.max(1)..1 << vars.len() {
            clauses.push(Clause::new(exclude(vars, a)));
        }
    }
    for (k, c) in p.constraints().iter().enumerate() {
        for t in forbidden_tuples(p, k, budget)? {
            clauses.push(Clause::new(c.scope().iter().zip(&t).flat_map(|(&v, &a)| exclude(&bits[v], a))));
        }
    }
    Ok((Cnf::new(next, clauses)?, map))
}

/// Selectors with at-least-one and pairwise at-most-one clauses, and for
/// every binary constraint and value on either side a clause stating that
/// the value implies one of its supports.
pub fn encode_support(p: &Csp) -> Result<(Cnf, EncodingMap)> {
    p.require_binary()?;
    let mut map = EncodingMap::new(Encoding::Support, p.num_vars());
    let sel = selectors(p, &mut map);
    let mut clauses = Vec::new();
    alo(&sel, &mut clauses);
    amo_pairwise(&sel, &mut clauses);
    for c in p.constraints() {
        let (x, y) = (c.scope()[0], c.scope()[1]);
        for a in 0..p.domain_size(x) {
            let supports = (0..p.domain_size(y)).filter(|&b| c.allows(&[a, b]));
            clauses.push(Clause::new(
                std::iter::once(Lit::new(sel[x][a], false)).chain(supports.map(|b| Lit::new(sel[y][b], true))),
            ));
        }
        for b in 0..p.domain_size(y) {
            let supports = (0..p.domain_size(x)).filter(|&a| c.allows(&[a, b]));
            clauses.push(Clause::new(
                std::iter::once(Lit::new(sel[y][b], false)).chain(supports.map(|a| Lit::new(sel[x][a], true))),
            ));
        }
    }
    Ok((Cnf::new(total_vars(&sel), clauses)?, map))
}

/// Encodes `p` with the named CSP-to-SAT encoding. `amo` only affects the
/// direct encoding.
pub fn encode(p: &Csp, encoding: Encoding, amo: Amo) -> Result<(Cnf, EncodingMap)> {
    match encoding {
        Encoding::Direct => encode_direct(p, amo),
        Encoding::Log => encode_log(p),
        Encoding::Support => encode_support(p),
        other => Err(Error::Invalid(format!("{} is not a CSP-to-SAT encoding", other.name()))),
    }
}

/// Maps a model of the encoded formula back to one value index per CSP
/// variable. For selector encodings the first true selector is taken.
pub fn decode_csp_solution(map: &EncodingMap, p: &Csp, model: &Assignment) -> Result<Vec<usize>> {
    let value = |x: u32| model.get(x).ok_or(Error::PartialAssignment(x));
    let mut out = Vec::with_capacity(p.num_vars());
    match map.encoding {
        Encoding::Direct | Encoding::Support => {
            let groups = map.selector_groups();
            for (v, group) in groups.iter().enumerate() {
                let mut chosen = None;
                for (a, &x) in group.iter().enumerate() {
                    if value(x)? && chosen.is_none() {
                        chosen = Some(a);
                    }
                }
                out.push(chosen.ok_or_else(|| Error::Decode(format!("no value selected for variable {v}")))?);
            }
        }
        Encoding::Log => {
            for link in &map.bits {
                let mut a = 0usize;
                for (i, &x) in link.sat_vars.iter().enumerate() {
                    if value(x)? {
                        a |= 1 << i;
                    }
                }
                if a >= link.domain_size {
                    return Err(Error::Decode(format!("variable {} decodes to index {a}", link.csp_var)));
                }
                out.push(a);
            }
        }
        other => return Err(Error::Decode(format!("{} does not encode a CSP", other.name()))),
    }
    if out.len() != p.num_vars() {
        return Err(Error::Decode(format!("map covers {} of {} variables", out.len(), p.num_vars())));
    }
    Ok(out)
}
