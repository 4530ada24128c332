use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("BandBoundary: ({0}, {1}) is not in the open band")]
    BandBoundary(String, String),
    #[error("NotBasicAligned: no aligned representatives for {0} -> {1}")]
    NotBasicAligned(String, String),
    #[error(
        "UnboundedRect: closure of {0} meets the band boundary in infinitely many cluster points"
    )]
    UnboundedRect(String),
    #[error("DepthLimit: enumeration needs depth {0}, above the configured limit {1}")]
    DepthLimit(u32, u32),
    #[error("NotInCluster: {0}")]
    NotInCluster(String),
    #[error("InCluster: {0} belongs to the standard cluster")]
    InCluster(String),
    #[error("NotBasic: no nonzero basic morphism {0} -> {1} in the quotient")]
    NotBasic(String, String),
    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),
    #[error("NoMorphism: {0}")]
    NoMorphism(String),
    #[error("NotAModule: {0}")]
    NotAModule(String),
    #[error("InvalidWord: {0}")]
    InvalidWord(String),
    #[error("Unreachable: {0}")]
    Unreachable(String),
    #[error("InwardTail: digit prefix {0} is all ones")]
    InwardTail(String),
}

pub type Result<T> = std::result::Result<T, Error>;
