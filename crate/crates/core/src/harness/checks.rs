//! Cross-checks of solvers and encodings against the brute-force oracles.
//! Each returns the list of disagreements found on one instance.

use super::claims::{dp_plan, fc_plan, mac_plan};
use crate::csp::{check_solution, fc_solve, mac_solve, Csp, CspBranchPlan};
use crate::csp2sat::{self, decode_csp_solution};
use crate::encoding::{Amo, Encoding};
use crate::error::Result;
use crate::oracle::{brute_force_csp, brute_force_sat};
use crate::sat::{check_model, dp_solve, BranchPlan, Cnf};
use crate::sat2csp::{self, decode_sat_solution};

/// Solutions or models decoded per encoded instance.
const DECODE_CAP: usize = 64;

/// DP under two plans against the SAT oracle.
pub fn check_sat_solvers(f: &Cnf) -> Result<Vec<String>> {
    let truth = brute_force_sat(f, 0)?.status;
    let mut out = Vec::new();
    for (name, plan) in [("dp", dp_plan(f)), ("dp ascending", BranchPlan::ascending(f.num_vars()))] {
        let s = dp_solve(f, &plan);
        if s.status != truth {
            out.push(format!("{name}: {} but oracle says {}", s.status.as_str(), truth.as_str()));
        }
        if let Some(m) = &s.model {
            if !check_model(f, m)? {
                out.push(format!("{name}: returned model fails"));
            }
        }
    }
    Ok(out)
}

/// FC and MAC against the CSP oracle.
pub fn check_csp_solvers(p: &Csp) -> Result<Vec<String>> {
    let truth = brute_force_csp(p, 0)?.status;
    let mut out = Vec::new();
    let runs = [
        ("fc", fc_solve(p, &CspBranchPlan::static_order(p))?),
        ("fc singleton-first", fc_solve(p, &fc_plan(p))?),
        ("mac", mac_solve(p, &mac_plan(p))?),
    ];
    for (name, s) in runs {
        if s.status != truth {
            out.push(format!("{name}: {} but oracle says {}", s.status.as_str(), truth.as_str()));
        }
        if let Some(sol) = &s.solution {
            if !check_solution(p, sol)? {
                out.push(format!("{name}: returned solution fails"));
            }
        }
    }
    Ok(out)
}

/// The four SAT-to-CSP encodings: satisfiability is preserved, decoded
/// solutions are models, and the hidden and non-binary encodings have
/// exactly as many solutions as the formula has models.
pub fn check_sat_encodings(f: &Cnf) -> Result<Vec<String>> {
    let truth = brute_force_sat(f, 0)?;
    let mut out = Vec::new();
    for e in [Encoding::Dual, Encoding::Hidden, Encoding::Literal, Encoding::NonBinary] {
        let name = e.name();
        let (p, map) = sat2csp::encode(f, e)?;
        let enc = brute_force_csp(&p, DECODE_CAP)?;
        if enc.status != truth.status {
            out.push(format!("{name}: encoding is {} but formula is {}", enc.status.as_str(), truth.status.as_str()));
        }
        if matches!(e, Encoding::Hidden | Encoding::NonBinary) && enc.solution_count != truth.model_count {
            out.push(format!("{name}: {} solutions for {} models", enc.solution_count, truth.model_count));
        }
        let mut solutions = enc.solutions;
        if p.is_binary() {
            solutions.extend(mac_solve(&p, &mac_plan(&p))?.solution);
        }
        for sol in &solutions {
            match decode_sat_solution(&map, &p, sol) {
                Ok(a) if check_model(f, &a)? => {}
                Ok(_) => out.push(format!("{name}: solution {sol:?} decodes to a non-model")),
                Err(err) => out.push(format!("{name}: solution {sol:?} fails to decode: {err}")),
            }
        }
    }
    Ok(out)
}

/// The three CSP-to-SAT encodings (direct under both settings): the same
/// checks in the other direction. Direct with at-most-one clauses, log and
/// support have one model per solution.
pub fn check_csp_encodings(p: &Csp) -> Result<Vec<String>> {
    let truth = brute_force_csp(p, 0)?;
    let mut out = Vec::new();
    let mut runs = vec![
        ("direct", csp2sat::encode_direct(p, Amo::None)?),
        ("direct+amo", csp2sat::encode_direct(p, Amo::Pairwise)?),
        ("log", csp2sat::encode_log(p)?),
    ];
    if p.is_binary() {
        runs.push(("support", csp2sat::encode_support(p)?));
    }
    for (name, (f, map)) in runs {
        let enc = brute_force_sat(&f, DECODE_CAP)?;
        if enc.status != truth.status {
            out.push(format!("{name}: encoding is {} but problem is {}", enc.status.as_str(), truth.status.as_str()));
        }
        if name != "direct" && enc.model_count != truth.solution_count {
            out.push(format!("{name}: {} models for {} solutions", enc.model_count, truth.solution_count));
        }
        let mut models = enc.models;
        models.extend(dp_solve(&f, &dp_plan(&f)).model);
        for m in &models {
            match decode_csp_solution(&map, p, m) {
                Ok(sol) if check_solution(p, &sol)? => {}
                Ok(sol) => out.push(format!("{name}: model decodes to non-solution {sol:?}")),
                Err(err) => out.push(format!("{name}: model fails to decode: {err}")),
            }
        }
    }
    Ok(out)
}
