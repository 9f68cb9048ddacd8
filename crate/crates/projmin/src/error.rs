use num_bigint::BigUint;
use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Errors split into two families the CLI cares about: *domain* errors
/// (malformed or out-of-domain input) and *budget* errors (an exact
/// computation refused to continue rather than return an uncertified value).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot factor zero")]
    FactorZero,

    #[error("factorization budget exceeded; unfactored cofactor {cofactor}")]
    FactorBudget { cofactor: BigUint },

    #[error("{0} is not prime")]
    NotPrime(BigUint),

    #[error("content of the zero coefficient list is undefined")]
    ZeroContent,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("form {form:?} is not homogeneous: term {term:?} has degree {found}, term {reference:?} has degree {expected}")]
    NotHomogeneous {
        form: String,
        term: String,
        found: usize,
        reference: String,
        expected: usize,
    },

    #[error("degree mismatch {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix dimensions {0}x{1} and {2}x{3} are incompatible")]
    Dimension(usize, usize, usize, usize),

    #[error("generators are rank-deficient")]
    RankDeficient,

    #[error("Sylvester resultant requires two binary forms (N = 1), got N = {0}")]
    NotBinary(usize),

    #[error("degenerate specialization: Macaulay quotient was 0/0 after {retries} changes of variables")]
    DegenerateSpecialization { retries: usize },

    #[error("coefficient {coefficient} of the lift is not {prime}-integral")]
    NotIntegral { coefficient: String, prime: BigUint },

    #[error("the lift is not a morphism (resultant vanishes)")]
    NotMorphism,

    #[error("cannot scale a lift by zero")]
    ScaleByZero,

    #[error("a lift needs at least one nonzero form")]
    ZeroLift,

    #[error("invalid construction: {0}")]
    Invalid(String),
}

impl Error {
    /// True for errors where an exact computation gave up within its budget
    /// (the CLI maps these to exit code 2, everything else here to 1).
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::FactorBudget { .. } | Error::DegenerateSpecialization { .. }
        )
    }
}
