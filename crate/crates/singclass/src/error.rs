//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while parsing input or running an
/// algebraic computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input text violates the polynomial grammar.
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },

    /// A variable name appeared that is not part of the declared ring.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    /// A rational coefficient had denominator zero.
    #[error("division by zero in coefficient")]
    DivisionByZeroInCoefficient,

    /// The requested characteristic is neither zero nor a prime number.
    #[error("characteristic {0} is not zero or a prime")]
    NonPrimeCharacteristic(u64),

    /// Two operands live over different coefficient fields.
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),

    /// Two operands have a different number of variables.
    #[error("operands have a different number of variables ({0} vs {1})")]
    ArityMismatch(usize, usize),

    /// A substitution map whose linear part is a singular matrix.
    #[error("linear part of the substitution is not invertible")]
    NonInvertibleLinearPart,

    /// A variable index outside `0..nvars`.
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    /// An operation needed a larger jet bound than the one supplied.
    #[error("jet bound {bound} too small (need at least {needed})")]
    BoundTooSmall { bound: u32, needed: u32 },

    /// The germ was expected to vanish at the origin.
    #[error("polynomial has a nonzero constant term")]
    NotInMaximalIdeal,

    /// The germ was expected to have order at least two.
    #[error("polynomial has order {0}, expected at least {1}")]
    OrderTooSmall(u32, u32),

    /// A finiteness certificate was required but could not be produced.
    #[error("singularity not certified isolated up to jet bound {0}")]
    NotIsolated(u32),

    /// One-variable analysis: every exponent seen was divisible by p.
    #[error("no exponent prime to the characteristic found up to degree {0}")]
    QNotFoundUpTo(u32),

    /// The operation only makes sense for one-variable input.
    #[error("expected a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),

    /// An enumeration would exceed the feasibility budget.
    #[error("enumeration too large: {0}")]
    TooLarge(String),

    /// Catch-all for invalid arguments (zero input where nonzero is
    /// required, empty generator lists, and similar).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
