//! Seeded random instances.
//!
//! The stream is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`). Every
//! draw uses fixed-width integers so instances are bit-identical across
//! platforms. Distinct items are chosen by a partial Fisher-Yates shuffle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::csp::{Csp, CspVariable, ExtensionalConstraint};
use crate::error::{Error, Result};
use crate::sat::{Clause, Cnf, Lit};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenSpec {
    /// Fixed-width clauses over distinct variables with uniform signs.
    Ksat {
        vars: u32,
        clauses: usize,
        width: usize,
        seed: u64,
    },
    /// `constraints` distinct variable pairs, each forbidding
    /// `round(tightness * domain^2)` tuples chosen uniformly.
    BinaryCsp {
        vars: usize,
        constraints: usize,
        domain: usize,
        tightness: f64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Sat(Cnf),
    Csp(Csp),
}

pub fn gen_random(spec: &GenSpec) -> Result<Instance> {
    match *spec {
        GenSpec::Ksat {
            vars,
            clauses,
            width,
            seed,
        } => gen_ksat(vars, clauses, width, seed).map(Instance::Sat),
        GenSpec::BinaryCsp {
            vars,
            constraints,
            domain,
            tightness,
            seed,
        } => gen_binary_csp(vars, constraints, domain, tightness, seed).map(Instance::Csp),
    }
}

/// The first `k` entries of `items` after a partial Fisher-Yates shuffle.
fn choose<T: Copy>(rng: &mut ChaCha8Rng, items: &mut [T], k: usize) -> Vec<T> {
    let n = items.len() as u64;
    for i in 0..k {
        let j = rng.gen_range(i as u64..n) as usize;
        items.swap(i, j);
    }
    items[..k].to_vec()
}

pub fn gen_ksat(vars: u32, clauses: usize, width: usize, seed: u64) -> Result<Cnf> {
    if vars == 0 || clauses == 0 || width == 0 {
        return Err(Error::InvalidSpec("all sizes must be at least 1".into()));
    }
    if width > vars as usize {
        return Err(Error::InvalidSpec(format!("clause width {width} exceeds {vars} variables")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<u32> = (1..=vars).collect();
    let out = (0..clauses)
        .map(|_| {
            let mut vs = choose(&mut rng, &mut pool, width);
            vs.sort_unstable();
            Clause::new(vs.into_iter().map(|v| Lit::new(v, rng.gen_range(0u32..2) == 1)))
        })
        .collect();
    Cnf::new(vars, out)
}

pub fn gen_binary_csp(vars: usize, constraints: usize, domain: usize, tightness: f64, seed: u64) -> Result<Csp> {
    if vars == 0 || constraints == 0 || domain == 0 {
        return Err(Error::InvalidSpec("all sizes must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&tightness) {
        return Err(Error::InvalidSpec(format!("tightness {tightness} is outside [0, 1]")));
    }
    let mut pairs: Vec<(usize, usize)> = (0..vars).flat_map(|i| (i + 1..vars).map(move |j| (i, j))).collect();
    if constraints > pairs.len() {
        return Err(Error::InvalidSpec(format!(
            "{constraints} constraints exceed the {} pairs of {vars} variables",
            pairs.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = choose(&mut rng, &mut pairs, constraints);
    chosen.sort_unstable();
    let m = domain * domain;
    let forbidden = (tightness * m as f64).round() as usize;
    let cons = chosen
        .into_iter()
        .map(|(i, j)| {
            let mut cells: Vec<usize> = (0..m).collect();
            let ts = choose(&mut rng, &mut cells, forbidden);
            ExtensionalConstraint::forbids_tuples(vec![i, j], ts.into_iter().map(|t| vec![t / domain, t % domain]))
        })
        .collect();
    Csp::new((0..vars).map(|i| CspVariable::range(i, domain)).collect(), cons)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ksat_is_deterministic() {
        let spec = GenSpec::Ksat {
            vars: 5,
            clauses: 10,
            width: 3,
            seed: 1,
        };
        assert_eq!(gen_random(&spec).unwrap(), gen_random(&spec).unwrap());
        let Instance::Sat(f) = gen_random(&spec).unwrap() else { panic!() };
        assert_eq!(f.num_clauses(), 10);
        for c in f.clauses() {
            assert_eq!(c.len(), 3);
            let vs: Vec<u32> = c.vars().collect();
            assert!(vs.windows(2).all(|w| w[0] < w[1]));
        }
        assert_ne!(gen_ksat(5, 10, 3, 2).unwrap(), f);
    }

    #[test]
    fn bincsp_shape() {
        let p = gen_binary_csp(5, 4, 3, 0.34, 9).unwrap();
        assert_eq!(p.constraints().len(), 4);
        for c in p.constraints() {
            assert_eq!(c.tuples().len(), 3);
            assert!(c.scope()[0] < c.scope()[1]);
        }
        assert_eq!(p, gen_binary_csp(5, 4, 3, 0.34, 9).unwrap());
    }

    #[test]
    fn invalid_specs() {
        assert!(gen_ksat(2, 1, 3, 0).is_err());
        assert!(gen_ksat(0, 1, 1, 0).is_err());
        assert!(gen_binary_csp(2, 2, 2, 0.5, 0).is_err());
        assert!(gen_binary_csp(2, 1, 2, 1.5, 0).is_err());
    }

    #[test]
    fn spec_json() {
        let spec = GenSpec::BinaryCsp {
            vars: 4,
            constraints: 3,
            domain: 2,
            tightness: 0.5,
            seed: 7,
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"kind\":\"binary_csp\""));
        assert_eq!(serde_json::from_str::<GenSpec>(&text).unwrap(), spec);
    }
}
