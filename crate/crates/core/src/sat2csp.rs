//! Encodings of CNF formulas as CSPs: dual, hidden variable, literal and
//! non-binary.
//!
//! Dual values are the satisfying truth tuples of a clause over its
//! variables in literal order, enumerated lexicographically with `F < T`
//! and labelled by strings such as `"FT"`. Propositional variables become
//! CSP variables with domain `["F", "T"]`.

use crate::csp::{Csp, CspVariable, ExtensionalConstraint};
use crate::encoding::{ClauseLink, Encoding, EncodingMap, PropLink};
use crate::error::{Error, Result};
use crate::sat::{Assignment, Clause, Cnf};

const FALSE: &str = "F";
const TRUE: &str = "T";

fn truth_label(b: bool) -> &'static str {
    if b {
        TRUE
    } else {
        FALSE
    }
}

/// Empty clauses make the input trivially unsatisfiable; tautologies would
/// repeat a variable inside one clause's coordinates. Both are rejected.
fn check_clauses(f: &Cnf) -> Result<()> {
    if let Some(i) = f.clauses().iter().position(Clause::is_empty) {
        return Err(Error::EmptyClause(i));
    }
    match f.clauses().iter().position(Clause::is_tautology) {
        Some(i) => Err(Error::Invalid(format!("clause {i} is a tautology"))),
        None => Ok(()),
    }
}

/// Satisfying tuples of `c` over its variables, lexicographic with F < T.
fn satisfying_tuples(c: &Clause) -> Vec<Vec<bool>> {
    let k = c.len();
    (0u64..1 << k)
        .map(|bits| (0..k).map(|i| bits >> (k - 1 - i) & 1 == 1).collect::<Vec<bool>>())
        .filter(|t| c.lits().iter().zip(t).any(|(l, &b)| l.polarity() == b))
        .collect()
}

fn tuple_label(t: &[bool]) -> String {
    t.iter().map(|&b| truth_label(b)).collect()
}

fn tuple_of_label(label: &str) -> Result<Vec<bool>> {
    label
        .chars()
        .map(|ch| match ch {
            'T' => Ok(true),
            'F' => Ok(false),
            _ => Err(Error::Decode(format!("`{label}` is not a truth tuple"))),
        })
        .collect()
}

fn clause_links(f: &Cnf, first_id: usize, map: &mut EncodingMap) {
    for (i, c) in f.clauses().iter().enumerate() {
        map.clauses.push(ClauseLink {
            clause: i,
            csp_var: first_id + i,
            coords: c.vars().map(|v| v as i32).collect(),
        });
    }
}

/// One variable per clause over its satisfying tuples, with an agreement
/// constraint between every pair of clauses that share a variable.
pub fn encode_dual(f: &Cnf) -> Result<(Csp, EncodingMap)> {
    check_clauses(f)?;
    let tuples: Vec<Vec<Vec<bool>>> = f.clauses().iter().map(satisfying_tuples).collect();
    let variables = tuples
        .iter()
        .enumerate()
        .map(|(i, ts)| CspVariable::new(i, ts.iter().map(|t| tuple_label(t))))
        .collect();
    let mut constraints = Vec::new();
    let clauses = f.clauses();
    for i in 0..clauses.len() {
        for j in i + 1..clauses.len() {
            let shared: Vec<(usize, usize)> = clauses[i]
                .vars()
                .enumerate()
                .filter_map(|(pi, v)| clauses[j].vars().position(|w| w == v).map(|pj| (pi, pj)))
                .collect();
            if shared.is_empty() {
                continue;
            }
            let mut allowed = Vec::new();
            for (a, ta) in tuples[i].iter().enumerate() {
                for (b, tb) in tuples[j].iter().enumerate() {
                    if shared.iter().all(|&(pi, pj)| ta[pi] == tb[pj]) {
                        allowed.push(vec![a, b]);
                    }
                }
            }
            constraints.push(ExtensionalConstraint::allows_tuples(vec![i, j], allowed));
        }
    }
    let mut map = EncodingMap::new(Encoding::Dual, f.num_vars() as usize);
    clause_links(f, 0, &mut map);
    Ok((Csp::new(variables, constraints)?, map))
}

/// Propositional variables plus one dual variable per clause, linked by
/// projection constraints `(clause, variable)`.
pub fn encode_hidden(f: &Cnf) -> Result<(Csp, EncodingMap)> {
    check_clauses(f)?;
    let n = f.num_vars() as usize;
    let mut variables: Vec<CspVariable> = (0..n).map(|i| CspVariable::new(i, [FALSE, TRUE])).collect();
    let mut constraints = Vec::new();
    for (i, c) in f.clauses().iter().enumerate() {
        let ts = satisfying_tuples(c);
        let id = n + i;
        variables.push(CspVariable::new(id, ts.iter().map(|t| tuple_label(t))));
        for (pos, v) in c.vars().enumerate() {
            let allowed = ts.iter().enumerate().map(|(a, t)| vec![a, t[pos] as usize]);
            constraints.push(ExtensionalConstraint::allows_tuples(vec![id, v as usize - 1], allowed));
        }
    }
    let mut map = EncodingMap::new(Encoding::Hidden, n);
    map.props = (1..=f.num_vars()).map(|v| PropLink { prop: v, csp_var: v as usize - 1 }).collect();
    clause_links(f, n, &mut map);
    Ok((Csp::new(variables, constraints)?, map))
}

/// One variable per clause whose values are its literals; choosing
/// complementary literals in two clauses is forbidden.
pub fn encode_literal(f: &Cnf) -> Result<(Csp, EncodingMap)> {
    check_clauses(f)?;
    let clauses = f.clauses();
    let variables = clauses
        .iter()
        .enumerate()
        .map(|(i, c)| CspVariable::new(i, c.lits().iter().map(|l| l.to_string())))
        .collect();
    let mut constraints = Vec::new();
    for i in 0..clauses.len() {
        for j in i + 1..clauses.len() {
            let clash: Vec<Vec<usize>> = clauses[i]
                .lits()
                .iter()
                .enumerate()
                .filter_map(|(a, &l)| clauses[j].lits().iter().position(|&m| m == !l).map(|b| vec![a, b]))
                .collect();
            if !clash.is_empty() {
                constraints.push(ExtensionalConstraint::forbids_tuples(vec![i, j], clash));
            }
        }
    }
    let mut map = EncodingMap::new(Encoding::Literal, f.num_vars() as usize);
    for (i, c) in clauses.iter().enumerate() {
        map.clauses.push(ClauseLink {
            clause: i,
            csp_var: i,
            coords: c.lits().iter().map(|l| l.to_dimacs()).collect(),
        });
    }
    Ok((Csp::new(variables, constraints)?, map))
}

/// Propositional variables with one forbids constraint per clause holding
/// its single falsifying tuple. Unit clauses restrict the domain instead;
/// complementary units leave an empty domain.
pub fn encode_nonbinary(f: &Cnf) -> Result<(Csp, EncodingMap)> {
    check_clauses(f)?;
    let n = f.num_vars() as usize;
    let mut allowed = vec![[true, true]; n];
    for c in f.clauses().iter().filter(|c| c.len() == 1) {
        let l = c.lits()[0];
        allowed[l.var() as usize - 1][!l.polarity() as usize] = false;
    }
    let variables: Vec<CspVariable> = allowed
        .iter()
        .enumerate()
        .map(|(i, a)| CspVariable::new(i, [false, true].into_iter().filter(|&b| a[b as usize]).map(truth_label)))
        .collect();
    let mut constraints = Vec::new();
    for c in f.clauses().iter().filter(|c| c.len() >= 2) {
        let scope: Vec<usize> = c.vars().map(|v| v as usize - 1).collect();
        let falsifying: Option<Vec<usize>> = c
            .lits()
            .iter()
            .zip(&scope)
            .map(|(l, &v)| variables[v].value_index(truth_label(!l.polarity())))
            .collect();
        constraints.push(ExtensionalConstraint::forbids_tuples(scope, falsifying));
    }
    let mut map = EncodingMap::new(Encoding::NonBinary, n);
    map.props = (1..=f.num_vars()).map(|v| PropLink { prop: v, csp_var: v as usize - 1 }).collect();
    Ok((Csp::new(variables, constraints)?, map))
}

/// Encodes `f` with the named SAT-to-CSP encoding.
pub fn encode(f: &Cnf, encoding: Encoding) -> Result<(Csp, EncodingMap)> {
    match encoding {
        Encoding::Dual => encode_dual(f),
        Encoding::Hidden => encode_hidden(f),
        Encoding::Literal => encode_literal(f),
        Encoding::NonBinary => encode_nonbinary(f),
        other => Err(Error::Invalid(format!("{} is not a SAT-to-CSP encoding", other.name()))),
    }
}

/// Maps a solution of the encoded CSP back to a total assignment of the
/// original formula. Variables the solution says nothing about are false.
pub fn decode_sat_solution(map: &EncodingMap, csp: &Csp, solution: &[usize]) -> Result<Assignment> {
    if solution.len() != csp.num_vars() {
        return Err(Error::Decode(format!(
            "solution has {} values for {} variables",
            solution.len(),
            csp.num_vars()
        )));
    }
    let label = |var: usize| -> Result<&str> {
        csp.variables()[var]
            .domain
            .get(solution[var])
            .map(String::as_str)
            .ok_or(Error::ValueOutOfDomain {
                var,
                value: solution[var],
            })
    };
    let mut a = Assignment::new(map.original_vars as u32);
    let set = |a: &mut Assignment, var: u32, value: bool| -> Result<()> {
        match a.get(var) {
            Some(old) if old != value => Err(Error::Decode(format!("variable {var} decoded both ways"))),
            _ => {
                a.set(var, value);
                Ok(())
            }
        }
    };
    for link in &map.props {
        let value = match label(link.csp_var)? {
            TRUE => true,
            FALSE => false,
            other => return Err(Error::Decode(format!("`{other}` is not a truth value"))),
        };
        set(&mut a, link.prop, value)?;
    }
    for link in &map.clauses {
        match map.encoding {
            Encoding::Literal => {
                let lit = link.coords[solution[link.csp_var]];
                set(&mut a, lit.unsigned_abs(), lit > 0)?;
            }
            _ => {
                let tuple = tuple_of_label(label(link.csp_var)?)?;
                for (&v, &b) in link.coords.iter().zip(&tuple) {
                    set(&mut a, v as u32, b)?;
                }
            }
        }
    }
    Ok(a.completed(false))
}
