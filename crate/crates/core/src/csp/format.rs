//! The CSP instance document: JSON with fields in a fixed order,
//!
//! ```json
//! {
//!   "variables": [{ "id": 0, "domain": ["1", "2"] }],
//!   "constraints": [{ "scope": [0, 1], "semantics": "forbids", "tuples": [["1", "1"]] }]
//! }
//! ```
//!
//! Tuples are written with value labels in scope order, sorted by value
//! index, so writing a parsed canonical document reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use super::{Csp, CspVariable, ExtensionalConstraint, Semantics};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    variables: Vec<VariableEntry>,
    constraints: Vec<ConstraintEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableEntry {
    id: usize,
    domain: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintEntry {
    scope: Vec<usize>,
    semantics: SemanticsTag,
    tuples: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum SemanticsTag {
    Allows,
    Forbids,
}

pub fn write_csp(p: &Csp) -> String {
    let doc = Document {
        variables: p
            .variables()
            .iter()
            .map(|v| VariableEntry {
                id: v.id,
                domain: v.domain.clone(),
            })
            .collect(),
        constraints: p
            .constraints()
            .iter()
            .map(|c| ConstraintEntry {
                scope: c.scope().to_vec(),
                semantics: match c.semantics() {
                    Semantics::Allows => SemanticsTag::Allows,
                    Semantics::Forbids => SemanticsTag::Forbids,
                },
                tuples: c
                    .tuples()
                    .iter()
                    .map(|t| {
                        c.scope()
                            .iter()
                            .zip(t)
                            .map(|(&v, &i)| p.variables()[v].domain[i].clone())
                            .collect()
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}

pub fn parse_csp(text: &str) -> Result<Csp> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let variables: Vec<CspVariable> = doc
        .variables
        .into_iter()
        .map(|v| CspVariable {
            id: v.id,
            domain: v.domain,
        })
        .collect();
    let mut constraints = Vec::with_capacity(doc.constraints.len());
    for (k, c) in doc.constraints.into_iter().enumerate() {
        let mut tuples = Vec::with_capacity(c.tuples.len());
        for t in &c.tuples {
            if t.len() != c.scope.len() {
                return Err(Error::Invalid(format!(
                    "constraint {k}: tuple {t:?} does not match scope of arity {}",
                    c.scope.len()
                )));
            }
            let mut idx = Vec::with_capacity(t.len());
            for (&v, label) in c.scope.iter().zip(t) {
                let var = variables
                    .get(v)
                    .ok_or_else(|| Error::Invalid(format!("constraint {k} references unknown variable {v}")))?;
                let i = var.value_index(label).ok_or_else(|| {
                    Error::Invalid(format!("constraint {k}: `{label}` is not in the domain of variable {v}"))
                })?;
                idx.push(i);
            }
            tuples.push(idx);
        }
        let semantics = match c.semantics {
            SemanticsTag::Allows => Semantics::Allows,
            SemanticsTag::Forbids => Semantics::Forbids,
        };
        constraints.push(ExtensionalConstraint::new(c.scope, semantics, tuples));
    }
    Csp::new(variables, constraints)
}
