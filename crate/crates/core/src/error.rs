use thiserror::Error;

/// Errors reported by field construction and the higher-level routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field order p^(2n) = {q2} exceeds the table budget of {budget}")]
    BudgetExceeded { q2: u128, budget: u64 },

    #[error("no primitive modulus of degree {deg} found over F_{p}")]
    NoPrimitiveModulus { p: u32, deg: u32 },

    #[error("encoding {encoding} is out of range for a field of order {q2}")]
    InvalidEncoding { encoding: u32, q2: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero cannot be raised to a negative power")]
    ZeroToNegativePower,

    #[error("element with encoding {encoding} lies outside the subfield F_q")]
    NotInSubfield { encoding: u32 },

    #[error("q = {q} exceeds the limit {max} for this operation")]
    FieldTooLarge { q: u32, max: u32 },

    #[error("cubic has leading coefficient zero for this instance")]
    DegenerateLeadingCoefficient,

    #[error("coefficient b with encoding {encoding} lies in F_q, so 1 and b do not form a basis")]
    BasisDegenerate { encoding: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
