use thiserror::Error;

use crate::formula::ClauseId;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: duplicate `p` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: clause data before `p` header")]
    MissingHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: clause has a weight but no terminating 0")]
    UnterminatedClause { line: usize },
    #[error("line {line}: soft weight {weight} unsupported (only 1 and top are accepted)")]
    UnsupportedWeight { line: usize, weight: u64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("model covers {model_vars} variables, formula has {formula_vars}")]
    PartialModel { model_vars: u32, formula_vars: u32 },
    #[error("unknown clause id {0}")]
    UnknownClause(ClauseId),
    #[error("clause id {0} already present")]
    DuplicateClause(ClauseId),
    #[error("clause {0} is not soft and cannot take a blocking variable")]
    NotBlockable(ClauseId),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("search budget exhausted before a decision was reached")]
    Indeterminate,
    #[error("tracked clause id {0} is not in the formula")]
    UnknownTracked(ClauseId),
    #[error("the given clause set is not an unsatisfiable core")]
    InvalidCore,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("the pairwise encoding only supports bound 1 (got {0})")]
    Unsupported(usize),
    #[error("cardinality constraint has duplicate literal {0}")]
    DuplicateLiteral(i64),
    #[error("cardinality constraint has no literals")]
    Empty,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MaxSatError {
    #[error("hard clauses are unsatisfiable")]
    HardClausesUnsat,
    #[error("clause database needs {needed} bytes, budget is {limit}")]
    MemoryBudget { needed: usize, limit: usize },
    #[error("time limit reached")]
    Timeout,
    #[error("brute force limited to {limit} variables, formula has {vars}")]
    TooManyVariables { vars: u32, limit: u32 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}
