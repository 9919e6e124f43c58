use thiserror::Error;

/// Errors raised by the arithmetic, character and verification layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("{x} is not in the domain of the {p}-adic logarithm (need x = 1 mod {need})")]
    PadicDomain { x: u64, p: u64, need: u64 },

    #[error("character mod {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },

    #[error("{0} does not divide {1}")]
    NotDivisor(u64, u64),

    #[error("prime power {p}^{beta} is outside the supported range: {reason}")]
    ExponentRange { p: u64, beta: u32, reason: &'static str },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("the prime 2 is not supported by this operation")]
    EvenPrime,

    #[error("modulus {0} is not a prime power")]
    NotPrimePower(u64),

    #[error("s = 1 is a pole")]
    Pole,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("prime modulus {0}: the bound for g is only measured empirically (use the empirical-constant sweep)")]
    EmpiricalOnly(u64),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
