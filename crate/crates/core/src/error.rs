use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unitary for the Hermitian form F")]
    NotUnitary,
    #[error("group closure exceeded {bound} elements")]
    ClosureOverflow { bound: usize },
    #[error("condition {condition} violated by {witness}")]
    ConditionViolated { condition: String, witness: String },
    #[error("no element of K reduces the displacement (|g33|^2 = {norm})")]
    NoDescent { norm: String },
    #[error("relator {word} does not evaluate to the identity class")]
    RelatorFails { word: String },
    #[error("third homogeneous coordinate vanishes")]
    DegenerateProjection,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
