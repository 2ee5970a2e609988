use thiserror::Error;

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} variables vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("jet order mismatch: order {left} vs order {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("substituted series must have zero constant term")]
    NonzeroConstantTerm,
    #[error("series is not a unit (its constant term vanishes)")]
    NotAUnit,
    #[error("expected {expected} components, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("exp undefined in unipotent calculus: linear part of the field is not nilpotent")]
    NonNilpotent,
    #[error("log undefined: linear part is not unipotent")]
    NotUnipotent,
    #[error("the zero vector field has no projective factor")]
    ZeroField,
    #[error("vector fields are linearly dependent")]
    DependentFields,
    #[error("coefficient matrix of the one-forms is singular")]
    SingularCoefficients,
    #[error("vector fields do not commute")]
    NonzeroBracket,
    #[error("one-form is not closed")]
    NotClosed,
    #[error("denominator is not a coordinate monomial times a unit")]
    NonMonomialDenominator,
    #[error("forbidden Laurent coefficient {exponents:?} is nonzero")]
    ForbiddenLaurentTerm { exponents: Vec<i64> },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("operation requires {0} variables")]
    WrongDimension(usize),
    #[error("Lie closure exceeded the dimension cap of {0}")]
    ClosureTooLarge(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    /// `true` for failures that indicate a bug or an impossible state rather
    /// than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistent(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
