use thiserror::Error;

/// Errors raised by the engine. Every precondition violation is reported,
/// never coerced.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a composition needs at least one part")]
    EmptyComposition,

    #[error("part {index} is {value}; parts must be positive")]
    NonPositivePart { index: usize, value: i64 },

    #[error("parts must be weakly decreasing (part {index} is {value}, after {previous})")]
    NotDecreasing { index: usize, value: u64, previous: u64 },

    #[error("part {index} is {value}; every part must be odd")]
    EvenPart { index: usize, value: u64 },

    #[error("part {index} is 1; every part must be at least 2")]
    UnitPart { index: usize },

    #[error("n must be at least {min}, got {got}")]
    IndexTooSmall { min: u64, got: u64 },

    #[error("gcd({h}, {k}) = {gcd}; arguments must be coprime")]
    NotCoprime { h: u64, k: u64, gcd: u64 },

    #[error("{what}: argument out of range ({detail})")]
    OutOfRange { what: &'static str, detail: String },

    #[error("modulus k = {0} must be odd")]
    EvenModulus(u64),

    #[error("series constant term {0} is not a unit")]
    NonUnitConstant(String),

    #[error("imaginary part of A_{k}({n}) is {magnitude}, above tolerance 2^-{tolerance_bits}")]
    ImaginaryResidue {
        k: u64,
        n: u64,
        magnitude: String,
        tolerance_bits: u32,
    },

    #[error("series for n = {n} not certified after {k_terms} terms at {precision_bits} bits (residual {residual})")]
    NotCertified {
        n: u64,
        k_terms: u64,
        precision_bits: u32,
        residual: String,
    },

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("cache file rejected: {0}")]
    Cache(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
