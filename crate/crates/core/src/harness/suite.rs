//! Instance streams the claims are verified over.

use serde::Serialize;

use crate::csp::Csp;
use crate::error::Result;
use crate::oracle::{gen_binary_csp, gen_ksat, CspFamily, SatFamily};
use crate::sat::Cnf;

/// Either the exhaustive tiny families or a seeded random ensemble. The
/// random ensemble draws instance `i` from seed `seed + i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "suite", rename_all = "snake_case")]
pub enum SuiteSpec {
    Exhaustive {
        max_vars: usize,
        max_clauses: usize,
        max_width: usize,
        max_domain: usize,
    },
    Random {
        count: u64,
        seed: u64,
        sat_vars: u32,
        sat_clauses: usize,
        sat_width: usize,
        csp_vars: usize,
        csp_constraints: usize,
        csp_domain: usize,
        csp_tightness: f64,
    },
}

impl SuiteSpec {
    pub fn exhaustive_default() -> SuiteSpec {
        SuiteSpec::Exhaustive {
            max_vars: 3,
            max_clauses: 4,
            max_width: 3,
            max_domain: 3,
        }
    }

    pub fn random_default(count: u64, seed: u64) -> SuiteSpec {
        SuiteSpec::Random {
            count,
            seed,
            sat_vars: 10,
            sat_clauses: 42,
            sat_width: 3,
            csp_vars: 8,
            csp_constraints: 12,
            csp_domain: 3,
            csp_tightness: 0.3,
        }
    }

    /// SAT instances in canonical order.
    pub fn sat_instances(&self) -> Result<Box<dyn Iterator<Item = Cnf>>> {
        match *self {
            SuiteSpec::Exhaustive {
                max_vars,
                max_clauses,
                max_width,
                ..
            } => Ok(Box::new(SatFamily::new(max_vars as u32, max_clauses, max_width)?.iter())),
            SuiteSpec::Random {
                count,
                seed,
                sat_vars,
                sat_clauses,
                sat_width,
                ..
            } => {
                gen_ksat(sat_vars, sat_clauses, sat_width, seed)?;
                Ok(Box::new((0..count).map(move |i| {
                    gen_ksat(sat_vars, sat_clauses, sat_width, seed.wrapping_add(i)).expect("validated")
                })))
            }
        }
    }

    /// Binary CSP instances in canonical order.
    pub fn csp_instances(&self) -> Result<Box<dyn Iterator<Item = Csp>>> {
        match *self {
            SuiteSpec::Exhaustive {
                max_vars, max_domain, ..
            } => Ok(Box::new(CspFamily::new(max_vars, max_domain)?.iter())),
            SuiteSpec::Random {
                count,
                seed,
                csp_vars,
                csp_constraints,
                csp_domain,
                csp_tightness,
                ..
            } => {
                gen_binary_csp(csp_vars, csp_constraints, csp_domain, csp_tightness, seed)?;
                Ok(Box::new((0..count).map(move |i| {
                    gen_binary_csp(csp_vars, csp_constraints, csp_domain, csp_tightness, seed.wrapping_add(i))
                        .expect("validated")
                })))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SuiteSpec::Exhaustive {
                max_vars,
                max_clauses,
                max_width,
                max_domain,
            } => format!(
                "exhaustive: CNFs over {max_vars} vars, <= {max_clauses} clauses of width <= {max_width}; \
                 binary CSPs with <= {max_vars} vars, domains <= {max_domain}"
            ),
            SuiteSpec::Random {
                count,
                seed,
                sat_vars,
                sat_clauses,
                sat_width,
                csp_vars,
                csp_constraints,
                csp_domain,
                csp_tightness,
            } => format!(
                "random: {count} instances from seed {seed}; {sat_width}-SAT with {sat_vars} vars, \
                 {sat_clauses} clauses; binary CSP with {csp_vars} vars, {csp_constraints} constraints, \
                 domain {csp_domain}, tightness {csp_tightness}"
            ),
        }
    }
}
