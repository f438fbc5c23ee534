use thiserror::Error;

/// Errors raised by ring construction, operation algebra, Thom-model
/// calculus and the expression grammar.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring specification: {0}")]
    InvalidSpec(String),

    #[error("ring basis too large: {size} monomials exceeds cap {cap}")]
    TooLarge { size: u128, cap: usize },

    #[error("elements belong to different rings")]
    RingMismatch,

    #[error("coefficient regimes differ")]
    CoefficientMismatch,

    #[error("image of generator `{generator}` violates its relation: {detail}")]
    RelationViolation { generator: String, detail: String },

    #[error("generator `{generator}` has degree {degree}; supported degrees here are 1 and 2")]
    UnsupportedGeneratorDegree { generator: String, degree: u32 },

    #[error("unsupported Adams parameter k = {0} (pass --allow-degenerate for k = 0)")]
    UnsupportedK(i64),

    #[error("theory mismatch: {0}")]
    TheoryMismatch(String),

    #[error("bundle refers to factor L{0} which the space does not have")]
    UnknownFactor(usize),

    #[error("unsupported bundle: {0}")]
    UnsupportedBundle(String),

    #[error("not divisible by the Thom class: {0}")]
    NotDivisible(String),

    #[error("map does not commute with the operation: {0}")]
    NotCommuting(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code class for the CLI: 2 for parse/usage errors,
    /// 3 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotDivisible(_) | Error::NotCommuting(_) | Error::RelationViolation { .. } => 3,
            _ => 2,
        }
    }
}
