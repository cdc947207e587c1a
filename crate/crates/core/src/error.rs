use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group order {order}: {reason}")]
    InvalidOrder { order: usize, reason: &'static str },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("unknown group selector `{0}`")]
    UnknownGroup(String),

    #[error("variable count mismatch ({left} vs {right})")]
    VariableMismatch { left: usize, right: usize },

    #[error("too many variables: {0} (packed monomials hold at most 16)")]
    TooManyVariables(usize),

    #[error("total degree {0} exceeds the packed exponent limit of 255")]
    DegreeOverflow(u32),

    #[error("coefficient mode mismatch: cannot combine exact and modular polynomials")]
    ModeMismatch,

    #[error("memory budget of {budget} bytes exceeded: {context} needs about {needed} bytes")]
    BudgetExceeded { budget: u64, needed: u64, context: String },

    #[error("matrix order {0} exceeds the subset expansion cap of 16")]
    OrderTooLarge(usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} is below 5")]
    PrimeTooSmall(u64),

    #[error("modulus {p}^{e} is outside the supported range")]
    ModulusTooLarge { p: u64, e: u32 },

    #[error("enumeration guardrail exceeded: k*n = {0} > 30")]
    Guardrail(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed polynomial cache file: {0}")]
    Format(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
