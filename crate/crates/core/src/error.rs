use thiserror::Error;

/// Failure to read a chart specification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("specification is missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("malformed specification: {0}")]
    Structure(String),
}

impl From<serde_json::Error> for SpecError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_data() {
            SpecError::Structure(e.to_string())
        } else {
            SpecError::Json {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            }
        }
    }
}

/// Failure to profile a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("no rows")]
    NoRows,
    #[error("ragged rows: row {row} does not match the header columns")]
    Ragged { row: usize },
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("cannot read data: {0}")]
    Read(String),
}

/// A rule file that cannot be loaded.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown predicate `{name}/{arity}`")]
    UnknownPredicate {
        line: usize,
        name: String,
        arity: usize,
    },
    #[error("line {line}: rule `{rule}` is not range-restricted: variable {var} is unbound")]
    Unsafe {
        line: usize,
        rule: String,
        var: String,
    },
    #[error("duplicate rule id `{0}`")]
    DuplicateRule(String),
    #[error("predicate `{0}` depends negatively on itself through a cycle")]
    NotStratified(String),
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
}

/// An edit that cannot be applied to a specification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("no such encoding `{0}`")]
    NoSuchEncoding(String),
    #[error("channel occupied: `{0}`")]
    ChannelOccupied(String),
    #[error("{action} is not applicable: {reason}")]
    NotApplicable { action: String, reason: String },
}

/// A diff that does not fit the specification it is applied to.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot apply diff entry at `{path}`: {reason}")]
pub struct DiffError {
    pub path: String,
    pub reason: String,
}

/// Configuration that cannot be loaded.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Parse(String),
    #[error("cost for {0} must be a non-negative number")]
    BadCost(String),
    #[error("cost table is missing {0}")]
    MissingCost(String),
}

/// An integer program whose equivalence links leave some groups without a
/// consistent choice.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("infeasible: groups {groups:?} cannot each select exactly one action")]
pub struct Infeasible {
    pub groups: Vec<usize>,
}
