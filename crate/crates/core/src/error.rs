use thiserror::Error;

use crate::exactla::Field;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed scalar fields: {0} vs {1}")]
    MixedField(Field, Field),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid quiver spec: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("invalid string: {0}")]
    InvalidString(String),
    #[error("bands unsupported")]
    BandsUnsupported,
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("zero module")]
    ZeroModule,
    #[error("algebra is not gentle: {0}")]
    NotGentle(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
