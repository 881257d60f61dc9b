//! Brute-force ground truth, exhaustive instance families and seeded random
//! generators.

mod family;
mod random;

pub use family::{CspFamily, SatFamily, FAMILY_LIMIT};
pub use random::{gen_binary_csp, gen_ksat, gen_random, GenSpec, Instance};

use crate::csp::Csp;
use crate::error::{Error, Result};
use crate::sat::{Assignment, Cnf, Status};

/// Largest formula the SAT oracle enumerates.
pub const MAX_SAT_VARS: u32 = 24;
/// Largest domain product the CSP oracle enumerates.
pub const MAX_CSP_PRODUCT: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatOracle {
    pub status: Status,
    pub model_count: u64,
    /// The first models in lexicographic order (x1 most significant, false
    /// before true), at most the requested cap.
    pub models: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspOracle {
    pub status: Status,
    pub solution_count: u64,
    /// The first solutions in lexicographic order of value indices.
    pub solutions: Vec<Vec<usize>>,
}

/// Enumerates all `2^n` total assignments and counts the models.
pub fn brute_force_sat(f: &Cnf, model_cap: usize) -> Result<SatOracle> {
    let n = f.num_vars();
    if n > MAX_SAT_VARS {
        return Err(Error::CapExceeded(format!("{n} variables exceed the oracle cap of {MAX_SAT_VARS}")));
    }
    let bit = |v: u32| 1u32 << (n - v);
    let masks: Vec<(u32, u32)> = f
        .clauses()
        .iter()
        .map(|c| {
            c.lits().iter().fold((0, 0), |(pos, neg), l| {
                if l.is_positive() {
                    (pos | bit(l.var()), neg)
                } else {
                    (pos, neg | bit(l.var()))
                }
            })
        })
        .collect();
    let mut out = SatOracle {
        status: Status::Unsat,
        model_count: 0,
        models: Vec::new(),
    };
    for m in 0u32..1 << n {
        if masks.iter().all(|&(pos, neg)| m & pos != 0 || !m & neg != 0) {
            out.model_count += 1;
            if out.models.len() < model_cap {
                let values: Vec<bool> = (1..=n).map(|v| m & bit(v) != 0).collect();
                out.models.push(Assignment::from_values(&values));
            }
        }
    }
    if out.model_count > 0 {
        out.status = Status::Sat;
    }
    Ok(out)
}

/// Enumerates the domain product in lexicographic order and counts the
/// solutions. A constraint is tested as soon as its whole scope has a value,
/// so prefixes that already violate one are not extended; no solution is
/// skipped and the order is unchanged.
pub fn brute_force_csp(p: &Csp, solution_cap: usize) -> Result<CspOracle> {
    let product = p.domain_product();
    if product > MAX_CSP_PRODUCT {
        return Err(Error::CapExceeded(format!("domain product {product} exceeds the oracle cap of 2^24")));
    }
    let n = p.num_vars();
    // Dense permission table per constraint, indexed mixed-radix over the
    // scope, filed under the last variable of its scope.
    let mut at_level: Vec<Vec<(Vec<usize>, Vec<bool>)>> = vec![Vec::new(); n];
    for c in p.constraints() {
        let size: usize = c.scope().iter().map(|&v| p.domain_size(v)).product();
        let mut table = Vec::with_capacity(size);
        let mut t = vec![0; c.arity()];
        for _ in 0..size {
            table.push(c.allows(&t));
            for i in (0..t.len()).rev() {
                t[i] += 1;
                if t[i] < p.domain_size(c.scope()[i]) {
                    break;
                }
                t[i] = 0;
            }
        }
        let last = *c.scope().iter().max().expect("arity >= 2");
        at_level[last].push((c.scope().to_vec(), table));
    }
    let mut out = CspOracle {
        status: Status::Unsat,
        solution_count: 0,
        solutions: Vec::new(),
    };
    if product == 0 {
        return Ok(out);
    }
    if n == 0 {
        out.status = Status::Sat;
        out.solution_count = 1;
        if solution_cap > 0 {
            out.solutions.push(Vec::new());
        }
        return Ok(out);
    }
    let consistent = |point: &[usize], level: usize| {
        at_level[level].iter().all(|(scope, table)| {
            table[scope.iter().fold(0, |acc, &v| acc * p.domain_size(v) + point[v])]
        })
    };
    let mut point = vec![0usize; n];
    // `level` is the next variable to check after setting `point[level]`.
    let mut level = 0usize;
    loop {
        if level == n {
            out.solution_count += 1;
            if out.solutions.len() < solution_cap {
                out.solutions.push(point.clone());
            }
        } else if consistent(&point, level) {
            level += 1;
            if level < n {
                point[level] = 0;
            }
            continue;
        }
        // Advance to the next candidate at the deepest open level.
        loop {
            if level == n {
                level -= 1;
            }
            point[level] += 1;
            if point[level] < p.domain_size(level) {
                break;
            }
            if level == 0 {
                if out.solution_count > 0 {
                    out.status = Status::Sat;
                }
                return Ok(out);
            }
            level -= 1;
        }
    }
}
