use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("determinant {0} is not ±1")]
    BadDeterminant(f64),
    #[error("isometry is not hyperbolic")]
    NotHyperbolic,
    #[error("axes cross or share an endpoint")]
    AxesNotDisjoint,
    #[error("word evaluates to an elliptic, parabolic or trivial element")]
    DegenerateWord,
    #[error("empty word")]
    EmptyWord,
    #[error("letter {0:?} is not a generator of this group")]
    BadLetter(char),
    #[error("invalid coordinates: {0}")]
    InvalidPoint(String),
    #[error("point is outside the fundamental domain")]
    OutsideDomain,
    #[error("({0}, {1}) is not a primitive slope")]
    NotPrimitive(i64, i64),
    #[error("no system of {0} disjoint simple closed geodesics exists")]
    NoSystem(u32),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid boundary length: {0}")]
    InvalidBoundary(String),
}

pub type Result<T> = std::result::Result<T, Error>;
