//! Correspondence between an original instance and its encoding, and its
//! JSON sidecar document.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    SatToCsp,
    CspToSat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Dual,
    Hidden,
    Literal,
    NonBinary,
    Direct,
    Log,
    Support,
}

impl Encoding {
    pub const ALL: [Encoding; 7] = [
        Encoding::Dual,
        Encoding::Hidden,
        Encoding::Literal,
        Encoding::NonBinary,
        Encoding::Direct,
        Encoding::Log,
        Encoding::Support,
    ];

    pub fn direction(self) -> Direction {
        match self {
            Encoding::Dual | Encoding::Hidden | Encoding::Literal | Encoding::NonBinary => Direction::SatToCsp,
            Encoding::Direct | Encoding::Log | Encoding::Support => Direction::CspToSat,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Encoding::Dual => "dual",
            Encoding::Hidden => "hidden",
            Encoding::Literal => "literal",
            Encoding::NonBinary => "nonbinary",
            Encoding::Direct => "direct",
            Encoding::Log => "log",
            Encoding::Support => "support",
        }
    }

    pub fn from_name(name: &str) -> Option<Encoding> {
        Encoding::ALL.into_iter().find(|e| e.name() == name)
    }
}

/// At-most-one clauses in the direct encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Amo {
    #[default]
    None,
    Pairwise,
}

impl Amo {
    pub fn name(self) -> &'static str {
        match self {
            Amo::None => "none",
            Amo::Pairwise => "pairwise",
        }
    }
}

/// Propositional variable to CSP variable (hidden, non-binary).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropLink {
    pub prop: u32,
    pub csp_var: usize,
}

/// Clause to CSP variable (dual, hidden, literal). `coords` lists the
/// propositional variables a dual value's coordinates refer to; for the
/// literal encoding it lists the clause's literals, one per value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseLink {
    pub clause: usize,
    pub csp_var: usize,
    pub coords: Vec<i32>,
}

/// CSP `(variable, value)` to its selector SAT variable (direct, support).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectorLink {
    pub csp_var: usize,
    pub value: usize,
    pub sat_var: u32,
}

/// CSP variable to its bit SAT variables, least significant first (log).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitLink {
    pub csp_var: usize,
    pub domain_size: usize,
    pub sat_vars: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingMap {
    pub direction: Direction,
    pub encoding: Encoding,
    /// Variables of the original instance.
    pub original_vars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amo: Option<Amo>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub props: Vec<PropLink>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clauses: Vec<ClauseLink>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub selectors: Vec<SelectorLink>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bits: Vec<BitLink>,
}

impl EncodingMap {
    pub(crate) fn new(encoding: Encoding, original_vars: usize) -> EncodingMap {
        EncodingMap {
            direction: encoding.direction(),
            encoding,
            original_vars,
            amo: None,
            props: Vec::new(),
            clauses: Vec::new(),
            selectors: Vec::new(),
            bits: Vec::new(),
        }
    }

    /// CSP variable standing for propositional variable `prop`.
    pub fn csp_var_of_prop(&self, prop: u32) -> Option<usize> {
        self.props.iter().find(|l| l.prop == prop).map(|l| l.csp_var)
    }

    /// CSP variable standing for clause `clause`.
    pub fn csp_var_of_clause(&self, clause: usize) -> Option<usize> {
        self.clauses.get(clause).filter(|l| l.clause == clause).map(|l| l.csp_var)
    }

    /// Selector SAT variable of `(csp_var, value)`.
    pub fn selector(&self, csp_var: usize, value: usize) -> Option<u32> {
        self.selectors
            .iter()
            .find(|l| l.csp_var == csp_var && l.value == value)
            .map(|l| l.sat_var)
    }

    /// Selector SAT variables grouped per CSP variable, in value order.
    pub fn selector_groups(&self) -> Vec<Vec<u32>> {
        let mut groups = vec![Vec::new(); self.original_vars];
        for l in &self.selectors {
            groups[l.csp_var].push(l.sat_var);
        }
        groups
    }

    pub fn bits_of(&self, csp_var: usize) -> Option<&BitLink> {
        self.bits.iter().find(|b| b.csp_var == csp_var)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("map serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<EncodingMap> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_round_trips() {
        let mut m = EncodingMap::new(Encoding::Direct, 2);
        m.amo = Some(Amo::Pairwise);
        m.selectors.push(SelectorLink {
            csp_var: 0,
            value: 0,
            sat_var: 1,
        });
        let text = m.to_json();
        assert!(text.contains("\"encoding\": \"direct\""));
        assert!(text.contains("\"direction\": \"csp_to_sat\""));
        let back = EncodingMap::from_json(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn names_round_trip() {
        for e in Encoding::ALL {
            assert_eq!(Encoding::from_name(e.name()), Some(e));
        }
    }
}
