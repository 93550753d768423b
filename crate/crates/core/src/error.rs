//! Error types for each layer of the engine.

use thiserror::Error;

/// Errors from the first-order vocabulary and its evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LogicError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown data type `{0}`")]
    UnknownType(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("intensional expansion exceeded depth limit {0}")]
    DepthExceeded(usize),
    #[error("data type `{0}` is not cyclic")]
    NotCyclic(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("invalid data type: {0}")]
    InvalidType(String),
    #[error("arity mismatch for `{name}`: expected {expected}, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("invalid clause: {0}")]
    InvalidClause(String),
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("`{0}` has no intensional definition")]
    NotIntensional(String),
    #[error("`{0}` is defined by several clauses and has no single conjunctive expansion")]
    Disjunctive(String),
    #[error("operationalized clause would exceed {0} literals")]
    TooLong(usize),
}

/// Errors from ingestion, encoding and knowledge declaration.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dates are not strictly increasing at row {row} ({date})")]
    NonMonotoneDates { row: usize, date: String },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("lag {lag} is not usable on a series of length {len}")]
    LagTooLarge { lag: usize, len: usize },
    #[error("series is empty")]
    EmptySeries,
    #[error("missing attribute `{0}`")]
    MissingAttribute(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors from the rule learners.
#[derive(Debug, Error)]
pub enum LearnError {
    #[error("no positive tuples (P0 = 0)")]
    NoPositives,
    #[error("no candidate literal has positive gain")]
    NoUsefulLiteral,
    #[error("no clause with positive gain covers any remaining positive example")]
    Unlearnable,
    #[error("time budget exceeded")]
    TimeBudgetExceeded,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid task: {0}")]
    InvalidTask(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Errors from hypothesis scoring and forecasting.
#[derive(Debug, Error)]
pub enum MmdrError {
    #[error("rule body is never satisfied on the evaluated examples")]
    BodyNeverSatisfied,
    #[error("fired rules contradict: `{lower_rule}` forces lower bound {lower} but `{upper_rule}` forces upper bound {upper}")]
    EmptyIntersection {
        lower_rule: String,
        upper_rule: String,
        lower: f64,
        upper: f64,
    },
    #[error("head `{0}` is not a target form")]
    NotATargetForm(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Errors from evaluation and trading simulation.
#[derive(Debug, Error)]
pub enum BacktestError {
    #[error("every prediction abstained")]
    NoDecisions,
    #[error("alignment error: {0}")]
    Alignment(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("portfolio value fell to {0} on day {1}")]
    Bankrupt(f64, usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("learner failed: {0}")]
    Learner(String),
}
