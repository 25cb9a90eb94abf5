use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("horn index {index} out of range for dimension {dim}")]
    HornIndex { dim: usize, index: usize },
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("duplicate cell name `{0}`")]
    DuplicateCell(String),
    #[error("malformed cell `{cell}`: {reason}")]
    MalformedCell { cell: String, reason: String },
    #[error("simplicial identity d_{i} d_{j} = d_{} d_{i} fails on `{cell}`", .j - 1)]
    SimplicialIdentity { cell: String, i: usize, j: usize },
    #[error("not a simplicial map: {0}")]
    NotAMap(String),
    #[error("not a monomorphism: {0}")]
    NotMono(String),
    #[error("decoration not preserved: {0}")]
    Decoration(String),
    #[error("invalid generator parameters: {0}")]
    GeneratorParams(String),
    #[error("cannot parse generator id `{0}`")]
    GeneratorSyntax(String),
    #[error("unknown Kan fixture `{0}`")]
    UnknownKanFixture(String),
    #[error("invalid lifting square: {0}")]
    Square(String),
    #[error("invalid Z-string: {0}")]
    ZString(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("document error: {0}")]
    Document(String),
}
