use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("operation requires a nonempty poset")]
    EmptyPoset,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("atom `{0}` has facets of mixed dimension")]
    MixedDimension(String),
    #[error("not a pseudomanifold: {0}")]
    NotPseudomanifold(String),
    #[error("stratum `{0}` is regular; its link is empty")]
    RegularStratum(String),
    #[error("no stratum labelled `{0}`")]
    UnknownStratum(String),
    #[error("links along stratum `{stratum}` differ: {first:?} vs {other:?}")]
    NonUniformLink {
        stratum: String,
        first: Vec<usize>,
        other: Vec<usize>,
    },
    #[error("complex is not orientable")]
    NonOrientable,
    #[error("not a manifold: {0}")]
    NotManifold(String),
    #[error("complex is not full with respect to its filtration: {0}")]
    NotFull(String),
    #[error("perversity is for dimension {perversity} but the complex has dimension {complex}")]
    PerversityMismatch { perversity: usize, complex: usize },
    #[error("invalid perversity: {0}")]
    InvalidPerversity(String),
    #[error("expected dimension divisible by 4, got {0}")]
    WrongDimension(usize),
    #[error("space is not a Witt space: {0}")]
    NotWitt(String),
    #[error("no signature rule for this description: {0}")]
    DescNotSupported(String),
    #[error("transfer normalization violated: {0}")]
    NormalizationViolation(String),
    #[error("size limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
