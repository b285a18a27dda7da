use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sieve limit {0} is below 2, the table would be empty")]
    EmptyTable(u64),
    #[error("sieve limit {limit} exceeds the supported ceiling {ceiling}")]
    LimitTooLarge { limit: u64, ceiling: u64 },
    #[error("could not allocate storage for {0} entries")]
    Resource(u64),
    #[error("x = {x} lies beyond the sieved limit {limit}")]
    OutOfRange { x: u64, limit: u64 },
    #[error("residue {residue} not coprime to modulus {modulus}")]
    NotCoprime { residue: u64, modulus: u64 },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("{0}")]
    Domain(&'static str),
    #[error("calibration point {x_ref} is below the minimum {min}")]
    PrecisionWarning { x_ref: u64, min: u64 },
    #[error("{n} prime variables requested; {algorithm} supports at most {max}")]
    TooManyVariables {
        n: usize,
        max: usize,
        algorithm: &'static str,
    },
    #[error("no Mertens constant supplied for residue {residue} mod {modulus}")]
    MissingConstant { residue: u64, modulus: u64 },
    #[error("x = {0} is too small for an asymptotic prediction (need x >= 16)")]
    TooSmallForPrediction(u64),
}
