use thiserror::Error;

/// Errors raised anywhere in the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed discriminants: sqrt({0}) and sqrt({1}) cannot be combined")]
    MixedDiscriminants(u64, u64),
    #[error("invalid discriminant {0}: must be 0 or a squarefree integer >= 2")]
    InvalidDiscriminant(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("inner series {index} has a nonzero constant term")]
    NonzeroConstantTerm { index: usize },
    #[error("subspace is not contained in the ambient span (vector {index})")]
    SubNotContained { index: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("membership is undecidable without a certificate: {0}")]
    UndecidableWithoutCertificate(String),
    #[error("point {point} does not lie in {space}")]
    PointNotInSpace { space: String, point: String },
    #[error("not a member plot: {0}")]
    NotAMember(String),
    #[error("unsupported curve: {0}")]
    UnsupportedCurve(String),
    #[error("unsupported map: {0}")]
    UnsupportedMap(String),
    #[error("cotangent dimension did not stabilize: dim {dim_k} at order {k}, dim {dim_k1} at order {k1}")]
    StabilizationFailure {
        k: usize,
        dim_k: usize,
        k1: usize,
        dim_k1: usize,
    },
    #[error("malformed bundle candidate: {0}")]
    MalformedCandidate(String),
    #[error("candidates are not members of the diffeology under test: {0}")]
    NotMembers(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("unsupported family for this operation: {0}")]
    UnsupportedFamily(String),
    #[error("{0}")]
    Parse(#[from] crate::dsl::ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
