use proptest::prelude::*;

use satcsp::csp::{ac3, check_solution, fc_solve, gac, mac_solve, parse_csp, write_csp, Csp, CspBranchPlan, CspVariable,
    DomainState, ExtensionalConstraint, Semantics};
use satcsp::csp2sat::{decode_csp_solution, encode_direct, encode_log, encode_support};
use satcsp::encoding::Amo;
use satcsp::oracle::{brute_force_csp, brute_force_sat, gen_binary_csp, gen_ksat};
use satcsp::sat::{check_model, dp_solve, parse_dimacs, unit_propagate, write_dimacs, Assignment, BranchPlan, Clause,
    Cnf, Lit};
use satcsp::sat2csp::{decode_sat_solution, encode_dual, encode_hidden, encode_literal, encode_nonbinary};

fn clause(n: u32) -> impl Strategy<Value = Clause> {
    proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..=(n as usize).min(3))
        .prop_flat_map(|vars| {
            let k = vars.len();
            (Just(vars), proptest::collection::vec(any::<bool>(), k))
        })
        .prop_map(|(vars, signs)| Clause::new(vars.into_iter().zip(signs).map(|(v, s)| Lit::new(v, s))))
}

fn cnf() -> impl Strategy<Value = Cnf> {
    cnf_up_to(10)
}

fn cnf_up_to(max_clauses: usize) -> impl Strategy<Value = Cnf> {
    (1u32..=6).prop_flat_map(move |n| {
        proptest::collection::vec(clause(n), 0..max_clauses).prop_map(move |cs| Cnf::new(n, cs).unwrap())
    })
}

/// A partial assignment over `n` variables: each variable unset, true or false.
fn partial(n: u32) -> impl Strategy<Value = Vec<Option<bool>>> {
    proptest::collection::vec(proptest::option::of(any::<bool>()), n as usize)
}

fn assignment(n: u32, values: &[Option<bool>]) -> Assignment {
    let mut a = Assignment::new(n);
    for (i, v) in values.iter().enumerate() {
        if let Some(b) = v {
            a.set(i as u32 + 1, *b);
        }
    }
    a
}

fn binary_csp() -> impl Strategy<Value = Csp> {
    (2usize..=4, 1usize..=3).prop_flat_map(|(n, d)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let cells: Vec<Vec<usize>> = (0..d).flat_map(|a| (0..d).map(move |b| vec![a, b])).collect();
        let constraint = (proptest::sample::select(pairs.clone()), any::<bool>(), proptest::sample::subsequence(cells.clone(), 0..=cells.len()));
        proptest::collection::vec(constraint, 0..5).prop_map(move |cs| {
            let vars = (0..n).map(|i| CspVariable::range(i, d)).collect();
            let cons = cs
                .into_iter()
                .map(|((i, j), allows, tuples)| {
                    let sem = if allows { Semantics::Allows } else { Semantics::Forbids };
                    ExtensionalConstraint::new(vec![i, j], sem, tuples)
                })
                .collect();
            Csp::new(vars, cons).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dimacs_round_trip(f in cnf()) {
        let text = write_dimacs(&f);
        let g = parse_dimacs(&text).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(write_dimacs(&g), text);
    }

    #[test]
    fn csp_format_round_trip(p in binary_csp()) {
        let text = write_csp(&p);
        let q = parse_csp(&text).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(write_csp(&q), text);
    }

    #[test]
    fn up_is_idempotent(f in cnf(), seed in partial(6)) {
        let a = assignment(f.num_vars(), &seed[..f.num_vars() as usize]);
        let first = unit_propagate(&f, &a);
        prop_assume!(!first.conflict);
        let again = unit_propagate(&f, &first.assignment);
        prop_assert!(!again.conflict);
        prop_assert_eq!(again.forced_count(), 0);
        prop_assert_eq!(again.assignment, first.assignment);
    }

    #[test]
    fn up_is_monotone(f in cnf(), small in partial(6), extra in partial(6)) {
        let n = f.num_vars() as usize;
        let a = assignment(f.num_vars(), &small[..n]);
        let wider: Vec<Option<bool>> = small[..n].iter().zip(&extra[..n]).map(|(s, e)| s.or(*e)).collect();
        let b = assignment(f.num_vars(), &wider);
        let (pa, pb) = (unit_propagate(&f, &a), unit_propagate(&f, &b));
        if pa.conflict {
            prop_assert!(pb.conflict);
        } else if !pb.conflict {
            prop_assert!(pa.assignment.is_subset_of(&pb.assignment));
        }
    }

    #[test]
    fn up_is_sound(f in cnf(), seed in partial(6)) {
        let a = assignment(f.num_vars(), &seed[..f.num_vars() as usize]);
        let p = unit_propagate(&f, &a);
        for m in brute_force_sat(&f, usize::MAX).unwrap().models {
            if a.is_subset_of(&m) {
                prop_assert!(!p.conflict);
                prop_assert!(p.assignment.is_subset_of(&m));
            }
        }
    }

    #[test]
    fn dp_matches_oracle(f in cnf()) {
        let truth = brute_force_sat(&f, 0).unwrap();
        for plan in [BranchPlan::ascending(f.num_vars()), BranchPlan::clause_guided(f.num_vars())] {
            let s = dp_solve(&f, &plan);
            prop_assert_eq!(s.status, truth.status);
            if let Some(m) = s.model {
                prop_assert!(check_model(&f, &m).unwrap());
            }
        }
    }

    #[test]
    fn gac_agrees_with_ac3(p in binary_csp()) {
        let s = DomainState::full(&p);
        let (a, g) = (ac3(&p, &s).unwrap(), gac(&p, &s));
        prop_assert_eq!(a.wipeout, g.wipeout);
        if !a.wipeout {
            prop_assert_eq!(a.state, g.state);
        }
    }

    #[test]
    fn ac_closure_ignores_constraint_order(p in binary_csp()) {
        let mut reversed = p.constraints().to_vec();
        reversed.reverse();
        let q = Csp::new(p.variables().to_vec(), reversed).unwrap();
        let (a, b) = (ac3(&p, &DomainState::full(&p)).unwrap(), ac3(&q, &DomainState::full(&q)).unwrap());
        prop_assert_eq!(a.wipeout, b.wipeout);
        if !a.wipeout {
            prop_assert_eq!(a.state, b.state);
        }
    }

    #[test]
    fn ac_keeps_every_solution(p in binary_csp()) {
        let r = ac3(&p, &DomainState::full(&p)).unwrap();
        for sol in brute_force_csp(&p, usize::MAX).unwrap().solutions {
            prop_assert!(!r.wipeout);
            for (v, &val) in sol.iter().enumerate() {
                prop_assert!(r.state.contains(v, val));
            }
        }
    }

    #[test]
    fn mac_tree_is_inside_fc_tree(p in binary_csp()) {
        let plan = CspBranchPlan::static_order(&p);
        let (fc, mac) = (fc_solve(&p, &plan).unwrap(), mac_solve(&p, &plan).unwrap());
        let truth = brute_force_csp(&p, 0).unwrap().status;
        prop_assert_eq!(fc.status, truth);
        prop_assert_eq!(mac.status, truth);
        prop_assert!(mac.branches <= fc.branches);
        prop_assert!(mac.nodes <= fc.nodes);
        for sol in [fc.solution, mac.solution].into_iter().flatten() {
            prop_assert!(check_solution(&p, &sol).unwrap());
        }
    }

    #[test]
    // Few clauses, so the dual encoding stays within the oracle's reach.
    fn sat_encodings_decode_to_models(f in cnf_up_to(6)) {
        prop_assume!(!f.has_empty_clause());
        let truth = brute_force_sat(&f, 0).unwrap();
        for (p, map) in [encode_dual(&f), encode_hidden(&f), encode_literal(&f), encode_nonbinary(&f)].map(Result::unwrap) {
            let enc = brute_force_csp(&p, 8).unwrap();
            prop_assert_eq!(enc.status, truth.status);
            for sol in enc.solutions {
                let m = decode_sat_solution(&map, &p, &sol).unwrap();
                prop_assert!(check_model(&f, &m).unwrap());
            }
        }
    }

    #[test]
    fn bijective_csp_encodings_count_solutions(p in binary_csp()) {
        let truth = brute_force_csp(&p, 0).unwrap();
        for (f, map) in [encode_direct(&p, Amo::Pairwise), encode_log(&p), encode_support(&p)].map(Result::unwrap) {
            let enc = brute_force_sat(&f, 8).unwrap();
            prop_assert_eq!(enc.model_count, truth.solution_count);
            for m in enc.models {
                let sol = decode_csp_solution(&map, &p, &m).unwrap();
                prop_assert!(check_solution(&p, &sol).unwrap());
            }
        }
    }

    #[test]
    fn ksat_generator_shape(vars in 3u32..30, clauses in 1usize..60, width in 1usize..=3, seed in any::<u64>()) {
        let f = gen_ksat(vars, clauses, width, seed).unwrap();
        prop_assert_eq!(f.num_vars(), vars);
        prop_assert_eq!(f.num_clauses(), clauses);
        for c in f.clauses() {
            prop_assert_eq!(c.len(), width);
            prop_assert!(!c.is_tautology());
        }
        prop_assert_eq!(gen_ksat(vars, clauses, width, seed).unwrap(), f);
    }

    #[test]
    fn binary_csp_generator_shape(vars in 2usize..8, domain in 1usize..4, tightness in 0.0f64..=1.0, seed in any::<u64>()) {
        let pairs = vars * (vars - 1) / 2;
        let constraints = pairs.min(5);
        let p = gen_binary_csp(vars, constraints, domain, tightness, seed).unwrap();
        prop_assert_eq!(p.num_vars(), vars);
        prop_assert!(p.is_binary());
        prop_assert_eq!(p.constraints().len(), constraints);
        let forbidden = (tightness * (domain * domain) as f64).round() as usize;
        for c in p.constraints() {
            let count = match c.semantics() {
                Semantics::Forbids => c.tuples().len(),
                Semantics::Allows => domain * domain - c.tuples().len(),
            };
            prop_assert_eq!(count, forbidden);
        }
        prop_assert_eq!(gen_binary_csp(vars, constraints, domain, tightness, seed).unwrap(), p);
    }
}
