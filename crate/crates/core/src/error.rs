use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("infinite enumeration: the ring has a Z component")]
    InfiniteEnumeration,
    #[error("not a prime of this ring: {0}")]
    NotAPrime(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported coefficient ring for {op}: {scalars}")]
    UnsupportedScalars { op: &'static str, scalars: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("module is not finitely generated over the source ring")]
    NotModuleFinite,
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("not a catalog homomorphism: {0}")]
    NotInCatalog(String),
    #[error("flatness classification disagrees with the empirical battery: {0}")]
    ClassificationMismatch(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
