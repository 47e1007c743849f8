use thiserror::Error;

use crate::series::SeriesError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operation not supported on this chart: {0}")]
    UnsupportedChart(String),
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands live in different star algebras")]
    AlgebraMismatch,
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("order too low: {0}")]
    OrderTooLow(String),
    #[error("no known adjoint for {0}")]
    NoKnownAdjoint(String),
    #[error("operator does not act on this model: {0}")]
    ModelMismatch(String),
    #[error("functional supports overlap on component {0}")]
    OverlappingSupports(usize),
    #[error("boundary exclusion leaves no trusted columns")]
    DegenerateTruncation,
    #[error("operator is not a right multiplication")]
    NotARightMultiplication,
    #[error("inconclusive prefix: {0}")]
    InconclusivePrefix(String),
    #[error("orders are unbounded below: {0}")]
    UnboundedOrder(String),
    #[error("sequence is not Cauchy: {0}")]
    NotCauchy(String),
    #[error("requested order {requested} exceeds the budget {budget}")]
    OrderBudgetExceeded { requested: i32, budget: i32 },
    #[error("value is not exactly representable: {0}")]
    Inexact(String),
    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("{0}")]
    Invalid(String),
}
