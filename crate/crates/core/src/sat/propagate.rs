use super::{Assignment, Cnf, Lit};

/// Result of running unit propagation to its fixpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation {
    pub assignment: Assignment,
    pub conflict: bool,
    /// Literals forced, in the order they were derived.
    pub forced: Vec<Lit>,
}

impl Propagation {
    pub fn forced_count(&self) -> usize {
        self.forced.len()
    }
}

/// Unit resolution to fixpoint above `a`.
///
/// Clauses are swept in formula order; every forced literal restarts the
/// sweep from the first clause, so the trace of forced literals is a pure
/// function of the formula and the starting assignment. Propagation stops
/// at the first clause found with every literal false.
pub fn unit_propagate(f: &Cnf, a: &Assignment) -> Propagation {
    let mut assignment = a.clone();
    let mut forced = Vec::new();
    'sweep: loop {
        for clause in f.clauses() {
            let mut unassigned = None;
            let mut open = 0usize;
            let mut satisfied = false;
            for &l in clause.lits() {
                match assignment.lit_value(l) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        unassigned = Some(l);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match open {
                0 => {
                    return Propagation {
                        assignment,
                        conflict: true,
                        forced,
                    }
                }
                1 => {
                    let l = unassigned.expect("one open literal");
                    assignment.assign_lit(l);
                    forced.push(l);
                    continue 'sweep;
                }
                _ => {}
            }
        }
        break;
    }
    Propagation {
        assignment,
        conflict: false,
        forced,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(num_vars: u32, clauses: &[&[i32]]) -> Propagation {
        let f = Cnf::from_ints(num_vars, clauses).unwrap();
        unit_propagate(&f, &Assignment::new(num_vars))
    }

    #[test]
    fn forced_chain() {
        let p = up(2, &[&[1], &[-1, 2]]);
        assert!(!p.conflict);
        assert_eq!(p.assignment.get(1), Some(true));
        assert_eq!(p.assignment.get(2), Some(true));
        assert_eq!(p.forced_count(), 2);
    }

    #[test]
    fn complementary_units_conflict() {
        assert!(up(1, &[&[1], &[-1]]).conflict);
    }

    #[test]
    fn no_unit_no_inference() {
        let p = up(2, &[&[1, 2]]);
        assert!(!p.conflict);
        assert_eq!(p.forced_count(), 0);
        assert_eq!(p.assignment, Assignment::new(2));
    }

    #[test]
    fn empty_clause_is_a_conflict() {
        assert!(up(1, &[&[]]).conflict);
    }

    #[test]
    fn restart_order_is_clause_order() {
        // The second clause becomes unit only after the third fires.
        let p = up(3, &[&[1, 2], &[-2, 3], &[-1]]);
        let trace: Vec<i32> = p.forced.iter().map(|l| l.to_dimacs()).collect();
        assert_eq!(trace, vec![-1, 2, 3]);
    }
}
