use crate::reduced::WalkType;
use crate::C64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("coin is not unitary: max |AA† - I| = {deviation:e}")]
    NonUnitary { deviation: f64 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("coin entry a{row}{col} is zero")]
    ZeroEntry { row: usize, col: usize },

    #[error("|a22| = 1: the staying component cannot be eliminated")]
    CentralReflection,

    #[error("eigenvalue {lambda} is not unimodular (|lambda| = {modulus})")]
    NonUnimodularLambda { lambda: C64, modulus: f64 },

    #[error("the two eigenvalue expressions disagree: {first} vs {second}")]
    InconsistentLambda { first: C64, second: C64 },

    #[error(
        "square condition fails: lambda^2 = {lambda_sq}, a1*a2 = {product} \
         (lambda = {lambda}, a1 = {a1}, a2 = {a2})"
    )]
    SquareConditionFailed {
        lambda: C64,
        a1: C64,
        a2: C64,
        lambda_sq: C64,
        product: C64,
    },

    #[error("reduced matrix does not have the expected shape (stray entry {stray:e})")]
    ReducedShape { stray: f64 },

    #[error("seed amplitudes are identically zero")]
    DegenerateSeeds,

    #[error("expected {expected:?} parameters, got {found:?}")]
    TypeMismatch { expected: WalkType, found: WalkType },

    #[error("tan(eta) is singular (|cos eta| = {cos:e})")]
    TanSingularity { cos: f64 },

    #[error("no closed-form measure is known for the {0} coin")]
    UnsupportedFamily(String),

    #[error("window half-width {width} is too small for {steps} steps")]
    WindowTooSmall { steps: usize, width: usize },

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("seed sequence does not cover the topology: {0}")]
    SeedCoverage(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
