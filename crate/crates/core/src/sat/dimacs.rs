//! DIMACS CNF reading and writing.
//!
//! Reference: <http://www.satcompetition.org/2009/format-benchmarks2009.html>

use std::fmt::Write as _;

use super::{Clause, Cnf, Lit};
use crate::error::{Error, Result};

/// Normalization performed while parsing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub tautologies_dropped: usize,
    pub duplicate_literals_removed: usize,
}

pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    parse_dimacs_with_report(text).map(|(cnf, _)| cnf)
}

pub fn parse_dimacs_with_report(text: &str) -> Result<(Cnf, ParseReport)> {
    let mut header: Option<(u32, usize)> = None;
    let mut report = ParseReport::default();
    let mut clauses = Vec::new();
    let mut raw_count = 0usize;
    let mut pending: Vec<i32> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(lineno, "duplicate header"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(parse_err(lineno, format!("malformed header `{trimmed}`")));
            }
            let vars = fields[2]
                .parse::<u32>()
                .map_err(|_| parse_err(lineno, format!("bad variable count `{}`", fields[2])))?;
            let count = fields[3]
                .parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("bad clause count `{}`", fields[3])))?;
            header = Some((vars, count));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(parse_err(lineno, "clause before `p cnf` header"));
        };
        for token in trimmed.split_whitespace() {
            let value: i32 = token
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad literal `{token}`")))?;
            if value == 0 {
                raw_count += 1;
                let before = pending.len();
                let clause = Clause::from_dimacs(&pending);
                report.duplicate_literals_removed += before - clause.len();
                if clause.is_tautology() {
                    report.tautologies_dropped += 1;
                } else {
                    clauses.push(clause);
                }
                pending.clear();
            } else {
                if value.unsigned_abs() > num_vars {
                    return Err(parse_err(
                        lineno,
                        format!("literal {} exceeds declared {num_vars} variables", value.unsigned_abs()),
                    ));
                }
                pending.push(value);
            }
        }
    }

    let Some((num_vars, count)) = header else {
        return Err(parse_err(last_line.max(1), "missing `p cnf` header"));
    };
    if !pending.is_empty() {
        return Err(parse_err(last_line, "missing terminating 0"));
    }
    if raw_count != count {
        return Err(parse_err(
            last_line.max(1),
            format!("header declares {count} clauses but {raw_count} were found"),
        ));
    }
    Ok((Cnf { num_vars, clauses }, report))
}

pub fn write_dimacs(f: &Cnf) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses());
    for c in f.clauses() {
        for l in c.lits() {
            let _ = write!(out, "{} ", Lit::to_dimacs(*l));
        }
        out.push_str("0\n");
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_clause() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f, Cnf::from_ints(2, &[&[1, -2]]).unwrap());
    }

    #[test]
    fn parses_empty_formula() {
        let f = parse_dimacs("p cnf 1 0").unwrap();
        assert_eq!(f.num_vars(), 1);
        assert!(f.clauses().is_empty());
    }

    #[test]
    fn rejects_literal_beyond_header() {
        let err = parse_dimacs("p cnf 2 1\n1 3 0").unwrap_err();
        assert_eq!(err.to_string(), "line 2: literal 3 exceeds declared 2 variables");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_dimacs("p cnf x 1\n1 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_dimacs("p cnf 2 2\n1 2 0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_dimacs("1 2 0"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn normalizes_clauses() {
        let (f, report) =
            parse_dimacs_with_report("c comment\np cnf 3 3\n1 1 -2 0\n2 -2 0\n3\n-1 0\n").unwrap();
        assert_eq!(f, Cnf::from_ints(3, &[&[1, -2], &[3, -1]]).unwrap());
        assert_eq!(report.tautologies_dropped, 1);
        assert_eq!(report.duplicate_literals_removed, 1);
    }

    #[test]
    fn writes_expected_text() {
        assert_eq!(write_dimacs(&Cnf::from_ints(2, &[&[1, -2]]).unwrap()), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(write_dimacs(&Cnf::from_ints(1, &[]).unwrap()), "p cnf 1 0\n");
    }

    #[test]
    fn empty_clause_round_trips() {
        let f = Cnf::from_ints(1, &[&[], &[1]]).unwrap();
        let text = write_dimacs(&f);
        assert_eq!(text, "p cnf 1 2\n0\n1 0\n");
        assert_eq!(parse_dimacs(&text).unwrap(), f);
    }
}
