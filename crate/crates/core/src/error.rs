use thiserror::Error;

/// Errors raised by the combinatorial and homological engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group enumeration exceeded the element cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("invalid Coxeter matrix: {0}")]
    InvalidCoxeterMatrix(String),
    #[error("elements belong to different Coxeter systems")]
    SystemMismatch,
    #[error("operation requires a type A system")]
    NotTypeA,
    #[error("{0} of the zero polynomial is undefined")]
    ZeroPolynomial(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree placement convention failed its calibration fixture: {0}")]
    ConventionUncalibrated(String),
    #[error("Duflo criterion found {found} candidates in left cell {cell}")]
    CriterionAmbiguous { cell: usize, found: usize },
    #[error("tableaux have different shapes")]
    ShapeMismatch,
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("{0} is not a Duflo involution")]
    NotDuflo(String),
    #[error("quiver algebra still has new basis elements at degree cap {degree_cap}")]
    NotFiniteDimensional { degree_cap: i32 },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("modules or maps are defined over different algebras")]
    AlgebraMismatch,
    #[error("the zero module has no projective cover")]
    ZeroModule,
    #[error("complex term is not a sum of indecomposable projectives")]
    NotProjective,
    #[error("resolution truncated at length {max_len}")]
    Truncated { max_len: usize },
    #[error("unknown name: {0}")]
    Unknown(String),
}
