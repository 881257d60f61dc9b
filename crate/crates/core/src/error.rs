use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid instance: {0}")]
    Invalid(String),

    #[error("assignment is partial: variable {0} is unassigned")]
    PartialAssignment(u32),

    #[error("value index {value} is outside the domain of variable {var}")]
    ValueOutOfDomain { var: usize, value: usize },

    #[error("constraint {constraint} has arity {arity}; only binary constraints are supported here (use gac for propagation)")]
    NonBinary { constraint: usize, arity: usize },

    #[error("trivially unsat input: clause {0} is empty")]
    EmptyClause(usize),

    #[error("constraint {constraint} needs {tuples} tuples to complement, exceeding the budget of {budget}")]
    TupleBudget {
        constraint: usize,
        tuples: u128,
        budget: u128,
    },

    #[error("cannot decode solution: {0}")]
    Decode(String),

    #[error("oracle cap exceeded: {0}")]
    CapExceeded(String),

    #[error("family too large: {size} instances (limit {limit})")]
    FamilyTooLarge { size: u128, limit: u128 },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
