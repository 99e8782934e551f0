use thiserror::Error;

/// Errors shared across the algebra and lab layers.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in K")]
    DivisionByZeroInK,
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched base fields")]
    FieldMismatch,
    #[error("mismatched number of variables: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("divisor indistinguishable from 0 at this precision")]
    DivisorTruncatedZero,
    #[error("series is zero at its precision, order undefined")]
    TruncatedZero,
    #[error("rational-function degree budget exceeded: degree {degree} > cap {cap}")]
    DegreeBudgetExceeded { degree: usize, cap: usize },
    #[error("graded formula invalid: initial form of Q is not Z^d")]
    NotDistinguished,
    #[error("polynomial must be monic for quotient arithmetic")]
    NotMonic,
    #[error(
        "Newton precondition failed: ord Q(seed) = {residual:?}, ord Q'(seed) = {derivative:?}"
    )]
    NewtonConditionFailed {
        residual: crate::series::OrderValue,
        derivative: crate::series::OrderValue,
    },
    #[error("inseparable residual: derivative vanishes at the seed")]
    InseparableResidual,
    #[error("deflation residual too large: root accurate only to order {residual_order}")]
    DeflationResidual { residual_order: i64 },
    #[error("requested precision {requested} exceeds input precision {available}")]
    PrecisionExceeded { requested: i64, available: i64 },
    #[error("candidate element is not a root at working precision (residual order {0})")]
    NotARoot(i64),
    #[error("exhaustive enumeration space {space} exceeds budget {budget}")]
    BudgetExceeded { space: u128, budget: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
