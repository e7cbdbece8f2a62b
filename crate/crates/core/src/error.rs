use thiserror::Error;

/// Everything that can go wrong across the crate, from parsing through the
/// rewriting engine up to spectrum checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero raised to a negative power")]
    ZeroToNegativePower,

    #[error("operation requires a nonzero element")]
    ZeroElement,

    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("element involves generator {gen}, outside the subalgebra below level {level}")]
    AboveLevel { gen: String, level: usize },

    #[error("laurent elements invert different generators ({a} vs {b})")]
    InvertedMismatch { a: String, b: String },

    #[error("laurent arithmetic past {gen} needs its derivation to vanish on lower generators")]
    LaurentObstruction { gen: String },

    #[error("element has mixed torus weights, not an eigenvector")]
    NotEigenvector,

    #[error("q-integer ({m}) with base 1 has no closed form")]
    DegenerateBase { m: u32 },

    #[error("binomial index {i} exceeds {n}")]
    BinomialRange { n: u32, i: u32 },

    #[error("element is not normal: no conjugation solves the equation at generator {gen}")]
    NotNormal { gen: String },

    #[error("the top derivation vanishes on the element, so no inner fraction arises")]
    DerivationVanishes,

    #[error("exact identity violated: {what}")]
    IdentityViolated { what: String },

    #[error("{what} exceeded bound {bound}")]
    BoundExceeded { what: String, bound: u64 },

    #[error("filtration search budget exhausted: total degree {max_total} reached; tightest constraint: {constraint}")]
    FiltrationBudget { max_total: u32, constraint: String },

    #[error("unsupported torus: {0}")]
    UnsupportedTorus(String),

    #[error("deletion check failed at level {level}: {detail}")]
    DeletionCheckFailed { level: usize, detail: String },

    #[error("presentation data invalid: {0}")]
    BadPresentation(String),

    #[error("unknown example or unreadable file: {0}")]
    UnknownTarget(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the command-line tool maps this error to.
    /// 2 is for usage, parse, and input-format problems; 3 for resource
    /// bounds; everything else is a verification failure (1).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::IndexOutOfRange { .. }
            | Error::BadPresentation(_)
            | Error::UnknownTarget(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::BoundExceeded { .. } | Error::FiltrationBudget { .. } => 3,
            _ => 1,
        }
    }
}
