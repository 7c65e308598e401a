use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unramified polynomial is not irreducible mod p: {0}")]
    NotIrreducible(String),
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("precision too small: need pi-precision {needed}, got {got}")]
    PrecisionTooSmall { needed: u32, got: u32 },
    #[error("p^M = {p}^{m} does not fit in 62 bits")]
    ModulusOverflow { p: u64, m: u32 },
    #[error("invalid field spec: {0}")]
    InvalidSpec(String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("element is zero at working precision")]
    ZeroInput,
    #[error("element is not a principal unit")]
    NotPrincipalUnit,
    #[error("precision exhausted at level {level} (need {needed}); raise the precision")]
    PrecisionExhausted { level: u32, needed: u32 },
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("no hyperplane contains the whole space")]
    NoHyperplane,
    #[error("subspace has codimension {0}, not 1")]
    NotHyperplane(usize),
    #[error("{value} is not divisible by {divisor}")]
    NotDivisible { value: i64, divisor: u64 },
    #[error("jumps are not strictly increasing")]
    NotSorted,
    #[error("zeta_p lies in K; the cyclic jump criterion does not apply")]
    ZetaInK,
    #[error("class is trivial")]
    ZeroClass,
    #[error("sequence is not admissible: {0}")]
    NotAdmissible(String),
    #[error("self-verification failed: {0}")]
    SelfVerificationFailed(String),
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
}
