//! Choosing what "number of branches" means.
//!
//! Every candidate convention is scored against the two equality claims
//! (DP vs MAC on the hidden encoding, DP on the direct encoding vs FC) over
//! the whole suite. The first candidate with no violations is selected.

use serde::Serialize;

use super::claims::{direct_plan, dp_plan, fc_plan, hidden_plan};
use super::{Convention, PolarityRule, SuiteSpec, Witness};
use crate::csp::{fc_solve, mac_solve, write_csp, CspSearchStats};
use crate::csp2sat::encode_direct;
use crate::encoding::Amo;
use crate::error::Result;
use crate::sat::{dp_solve, write_dimacs, SearchStats};
use crate::sat2csp::encode_hidden;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateResult {
    pub convention: String,
    pub hidden_compared: u64,
    pub hidden_violations: u64,
    pub direct_compared: u64,
    pub direct_violations: u64,
    /// Lowest-index counterexample for each equality, if any.
    pub hidden_counterexample: Option<Witness>,
    pub direct_counterexample: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibration {
    #[serde(skip)]
    pub selected: Convention,
    pub selected_name: String,
    /// False when no candidate reached zero violations; the candidate with
    /// the fewest violations is then selected.
    pub zero_violations: bool,
    pub candidates: Vec<CandidateResult>,
}

struct Pair {
    index: u64,
    dp: [SearchStats; 2],
    csp: CspSearchStats,
    text: String,
}

fn score(conv: Convention, pairs: &[Pair]) -> (u64, u64, Option<Witness>) {
    let mut compared = 0;
    let mut violations = 0;
    let mut first = None;
    for p in pairs {
        let dp = &p.dp[match conv.polarity {
            PolarityRule::PositiveFirst => 0,
            PolarityRule::ValueSelection => 1,
        }];
        if dp.decisions_total == 0 && p.csp.branches == 0 {
            continue;
        }
        compared += 1;
        let (lhs, rhs) = (conv.dp(dp), conv.csp(&p.csp));
        if lhs != rhs {
            violations += 1;
            first.get_or_insert_with(|| Witness {
                index: p.index,
                lhs,
                rhs,
                detail: None,
                instance: p.text.clone(),
            });
        }
    }
    (compared, violations, first)
}

pub fn calibrate_branch_convention(suite: &SuiteSpec, amo: Amo) -> Result<Calibration> {
    let mut hidden = Vec::new();
    for (i, f) in suite.sat_instances()?.enumerate() {
        let (p, map) = match encode_hidden(&f) {
            Ok(x) => x,
            Err(_) => continue,
        };
        let dp = dp_solve(&f, &dp_plan(&f));
        // Polarity rules only differ on the direct encoding.
        hidden.push(Pair {
            index: i as u64,
            dp: [dp.clone(), dp],
            csp: mac_solve(&p, &hidden_plan(&f, &p, &map))?,
            text: write_dimacs(&f),
        });
    }
    let mut direct = Vec::new();
    for (i, p) in suite.csp_instances()?.enumerate() {
        let (f, map) = match encode_direct(&p, amo) {
            Ok(x) => x,
            Err(_) => continue,
        };
        direct.push(Pair {
            index: i as u64,
            dp: [
                dp_solve(&f, &direct_plan(&f, &map, PolarityRule::PositiveFirst)),
                dp_solve(&f, &direct_plan(&f, &map, PolarityRule::ValueSelection)),
            ],
            csp: fc_solve(&p, &fc_plan(&p))?,
            text: write_csp(&p),
        });
    }
    let candidates: Vec<(Convention, CandidateResult)> = Convention::CANDIDATES
        .into_iter()
        .map(|conv| {
            let (hidden_compared, hidden_violations, hidden_counterexample) = score(conv, &hidden);
            let (direct_compared, direct_violations, direct_counterexample) = score(conv, &direct);
            (
                conv,
                CandidateResult {
                    convention: conv.name(),
                    hidden_compared,
                    hidden_violations,
                    direct_compared,
                    direct_violations,
                    hidden_counterexample,
                    direct_counterexample,
                },
            )
        })
        .collect();
    let total = |c: &CandidateResult| c.hidden_violations + c.direct_violations;
    let zero = candidates.iter().find(|(_, c)| total(c) == 0);
    let (selected, zero_violations) = match zero {
        Some((conv, _)) => (*conv, true),
        None => {
            let best = candidates.iter().min_by_key(|(_, c)| total(c)).expect("candidates exist");
            (best.0, false)
        }
    };
    Ok(Calibration {
        selected,
        selected_name: selected.name(),
        zero_violations,
        candidates: candidates.into_iter().map(|(_, c)| c).collect(),
    })
}
