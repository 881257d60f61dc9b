//! Exhaustive families of tiny instances in a fixed canonical order.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;

use crate::csp::{Csp, CspVariable, ExtensionalConstraint};
use crate::error::{Error, Result};
use crate::sat::{Clause, Cnf, Lit};

/// Largest family either enumerator agrees to produce.
pub const FAMILY_LIMIT: u128 = 10_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Every CNF over exactly `max_vars` variables made of 1 to `max_clauses`
/// distinct clauses from the canonical universe of clauses of width 1 to
/// `max_width` over distinct variables. Formulas over fewer variables
/// appear as members that leave some variables unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatFamily {
    pub max_vars: u32,
    pub max_clauses: usize,
    pub max_width: usize,
}

impl SatFamily {
    pub fn new(max_vars: u32, max_clauses: usize, max_width: usize) -> Result<SatFamily> {
        if max_vars == 0 || max_clauses == 0 || max_width == 0 {
            return Err(Error::InvalidSpec("family sizes must be at least 1".into()));
        }
        let f = SatFamily {
            max_vars,
            max_clauses,
            max_width,
        };
        let size = f.size();
        if size > FAMILY_LIMIT {
            return Err(Error::FamilyTooLarge {
                size,
                limit: FAMILY_LIMIT,
            });
        }
        Ok(f)
    }

    /// Clauses ordered by width, then variable ids, then signs with the
    /// positive literal first.
    pub fn universe(&self) -> Vec<Clause> {
        let mut out = Vec::new();
        for w in 1..=self.max_width.min(self.max_vars as usize) {
            for vars in (1..=self.max_vars).combinations(w) {
                for signs in 0u32..1 << w {
                    out.push(Clause::new(
                        vars.iter().enumerate().map(|(i, &v)| Lit::new(v, signs >> (w - 1 - i) & 1 == 0)),
                    ));
                }
            }
        }
        out
    }

    /// Closed-form universe size: sum over widths of C(V, w) 2^w.
    pub fn universe_size(&self) -> u128 {
        (1..=self.max_width.min(self.max_vars as usize) as u128)
            .map(|w| binomial(self.max_vars as u128, w) << w)
            .sum()
    }

    /// Closed-form family size: sum over c of C(U, c).
    pub fn size(&self) -> u128 {
        let u = self.universe_size();
        (1..=self.max_clauses as u128).map(|c| binomial(u, c)).sum()
    }

    /// Formulas by clause count, then lexicographically by universe index.
    pub fn iter(&self) -> impl Iterator<Item = Cnf> {
        let universe = Arc::new(self.universe());
        let n = self.max_vars;
        let u = universe.len();
        (1..=self.max_clauses.min(u)).flat_map(move |c| {
            let universe = Arc::clone(&universe);
            (0..u).combinations(c).map(move |idx| {
                Cnf::new(n, idx.iter().map(|&i| universe[i].clone()).collect()).expect("universe is in range")
            })
        })
    }
}

/// Every binary CSP with 1 to `max_vars` variables, each domain of size 1
/// to `max_domain`, and for every pair of variables either no constraint or
/// one relation from the canonical template set.
///
/// Over a pair with `m = a*b` tuples the templates are all relations when
/// `m <= 4`, and otherwise the relations with at most one or at least
/// `m - 1` tuples together with index equality and index disequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspFamily {
    pub max_vars: usize,
    pub max_domain: usize,
}

impl CspFamily {
    pub fn new(max_vars: usize, max_domain: usize) -> Result<CspFamily> {
        if max_vars == 0 || max_domain == 0 {
            return Err(Error::InvalidSpec("family sizes must be at least 1".into()));
        }
        let f = CspFamily { max_vars, max_domain };
        let size = f.size();
        if size > FAMILY_LIMIT {
            return Err(Error::FamilyTooLarge {
                size,
                limit: FAMILY_LIMIT,
            });
        }
        Ok(f)
    }

    /// Template relations over `[a] x [b]`, each a set of index pairs.
    pub fn templates(a: usize, b: usize) -> Vec<BTreeSet<(usize, usize)>> {
        let all: Vec<(usize, usize)> = (0..a).cartesian_product(0..b).collect();
        let m = all.len();
        if m <= 4 {
            return (0u32..1 << m)
                .map(|mask| all.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &t)| t).collect())
                .collect();
        }
        let mut out: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new()];
        out.extend(all.iter().map(|&t| BTreeSet::from([t])));
        out.extend(all.iter().map(|&t| all.iter().copied().filter(|&u| u != t).collect()));
        out.push(all.iter().copied().collect());
        out.push(all.iter().copied().filter(|&(x, y)| x == y).collect());
        out.push(all.iter().copied().filter(|&(x, y)| x != y).collect());
        let mut seen = BTreeSet::new();
        out.retain(|r| seen.insert(r.clone()));
        out
    }

    /// Closed-form template count for an `a x b` pair.
    pub fn template_count(a: usize, b: usize) -> u128 {
        let m = (a * b) as u128;
        if m <= 4 {
            1 << m
        } else if a.min(b) == 1 {
            // equality and disequality coincide with a singleton and a co-singleton
            2 * m + 2
        } else {
            2 * m + 4
        }
    }

    /// Closed-form family size: sum over n and domain vectors of the product
    /// over pairs of (1 + templates).
    pub fn size(&self) -> u128 {
        let mut total = 0;
        for n in 1..=self.max_vars {
            for ds in (0..n).map(|_| 1..=self.max_domain).multi_cartesian_product() {
                total += pairs(n)
                    .map(|(i, j)| 1 + Self::template_count(ds[i], ds[j]))
                    .product::<u128>();
            }
        }
        total
    }

    /// Instances by variable count, then domain-size vector, then template
    /// choices per pair (pairs lexicographic, last pair fastest, "no
    /// constraint" first).
    pub fn iter(&self) -> impl Iterator<Item = Csp> {
        let max_domain = self.max_domain;
        (1..=self.max_vars).flat_map(move |n| {
            (0..n).map(|_| 1..=max_domain).multi_cartesian_product().flat_map(move |ds| {
                let ps: Vec<(usize, usize)> = pairs(n).collect();
                let choices: Vec<Vec<Option<ExtensionalConstraint>>> = ps
                    .iter()
                    .map(|&(i, j)| {
                        std::iter::once(None)
                            .chain(Self::templates(ds[i], ds[j]).iter().map(|r| Some(stored(i, j, ds[i], ds[j], r))))
                            .collect()
                    })
                    .collect();
                let ds = Arc::new(ds);
                product_or_unit(choices).map(move |pick| {
                    let vars = ds.iter().enumerate().map(|(i, &d)| CspVariable::range(i, d)).collect();
                    Csp::new(vars, pick.into_iter().flatten().collect()).expect("templates are in range")
                })
            })
        })
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// A relation stored as allows when it holds at most half of the `a x b`
/// tuples, otherwise as forbids of its complement.
fn stored(i: usize, j: usize, a: usize, b: usize, r: &BTreeSet<(usize, usize)>) -> ExtensionalConstraint {
    if 2 * r.len() <= a * b {
        ExtensionalConstraint::allows_tuples(vec![i, j], r.iter().map(|&(x, y)| vec![x, y]))
    } else {
        let rest = (0..a).cartesian_product(0..b).filter(|t| !r.contains(t));
        ExtensionalConstraint::forbids_tuples(vec![i, j], rest.map(|(x, y)| vec![x, y]))
    }
}

/// Cartesian product that yields one empty choice for zero factors.
fn product_or_unit<T: Clone + 'static>(factors: Vec<Vec<T>>) -> Box<dyn Iterator<Item = Vec<T>>> {
    if factors.is_empty() {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new(factors.into_iter().map(Vec::into_iter).multi_cartesian_product())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_single_clause() {
        let fam = SatFamily::new(1, 1, 1).unwrap();
        let all: Vec<Cnf> = fam.iter().collect();
        assert_eq!(all, vec![Cnf::from_ints(1, &[&[1]]).unwrap(), Cnf::from_ints(1, &[&[-1]]).unwrap()]);
    }

    #[test]
    fn two_variable_universe() {
        // 2 variables choose 1 with 2 signs, plus 1 pair with 4 sign patterns.
        let fam = SatFamily::new(2, 1, 2).unwrap();
        assert_eq!(fam.universe_size(), 2 * 2 + 4);
        assert_eq!(fam.universe().len(), 8);
        assert_eq!(fam.iter().count(), 8);
        let distinct: BTreeSet<Clause> = fam.universe().into_iter().collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn sat_sizes_match_enumeration() {
        for (v, c, k) in [(1, 3, 1), (2, 3, 2), (3, 2, 3), (3, 3, 2), (2, 8, 2)] {
            let fam = SatFamily::new(v, c, k).unwrap();
            assert_eq!(fam.iter().count() as u128, fam.size(), "V={v} C={c} K={k}");
        }
        assert_eq!(SatFamily::new(3, 4, 3).unwrap().size(), 17901);
    }

    #[test]
    fn sat_family_limit() {
        assert!(matches!(SatFamily::new(4, 6, 4), Err(Error::FamilyTooLarge { .. })));
    }

    #[test]
    fn csp_singleton_domains() {
        // n=1: one instance; n=2 over singletons: no constraint, allows {}, allows {(1,1)}
        let fam = CspFamily::new(2, 1).unwrap();
        assert_eq!(fam.size(), 1 + (1 + 2));
        assert_eq!(fam.iter().count(), 4);
    }

    #[test]
    fn template_counts() {
        for a in 1..=5 {
            for b in 1..=5 {
                assert_eq!(CspFamily::templates(a, b).len() as u128, CspFamily::template_count(a, b), "{a}x{b}");
            }
        }
    }

    #[test]
    fn csp_sizes_match_enumeration() {
        for (n, d) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
            let fam = CspFamily::new(n, d).unwrap();
            assert_eq!(fam.iter().count() as u128, fam.size(), "N={n} D={d}");
        }
    }

    #[test]
    fn stored_form_is_the_smaller_side() {
        for p in CspFamily::new(2, 3).unwrap().iter() {
            for c in p.constraints() {
                let m = p.domain_size(c.scope()[0]) * p.domain_size(c.scope()[1]);
                assert!(2 * c.tuples().len() <= m);
            }
        }
    }
}
