use thiserror::Error;

/// Errors raised while loading or validating a graph document.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("malformed graph document at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate vertex id {id:?} at vertices[{index}]")]
    DuplicateVertex { id: String, index: usize },
    #[error("duplicate edge id {id:?} at edges[{index}]")]
    DuplicateEdge { id: String, index: usize },
    #[error("edges[{index}].{field} refers to unknown vertex {vertex:?}")]
    DanglingEndpoint {
        index: usize,
        field: &'static str,
        vertex: String,
    },
    #[error("graph has no vertices")]
    NoVertices,
    #[error("graph has no edges")]
    NoEdges,
}

/// Errors from the spectral analysis of a vertex matrix.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("sink at vertex {0}")]
    Sink(String),
}

/// Errors from the word calculus.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("operands belong to different graphs")]
    GraphMismatch,
    #[error("normal form level {level} is below the required minimum {required}")]
    LevelTooLow { level: usize, required: usize },
    #[error("element is not homogeneous for the gauge grading")]
    NotHomogeneous,
    #[error("unknown edge id {0:?}")]
    UnknownEdge(String),
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
}

/// Errors raised by state evaluation, functionals and filtration building.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum KmsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("no faithful-on-F_k critical KMS state exists for this graph")]
    NoState,
    #[error("critical state is not exactly rational; use float mode")]
    NotExact,
    #[error("operation requires the Cuntz graph (one vertex)")]
    NotCuntz,
    #[error("lengths must agree: |mu| = {mu}, |nu| = {nu}")]
    LengthMismatch { mu: usize, nu: usize },
    #[error("term {0} lies outside the span of single-edge words S_i S_j*")]
    OutsideTauDomain(String),
    #[error("vertex matrix is not row-regular")]
    NotRowRegular,
    #[error("phi/tau proportionality violated: deviation {0:e}")]
    NotProportional(f64),
    #[error("shift length r must be at least 1")]
    ZeroShift,
    #[error("Gram matrix is not positive semidefinite")]
    NotPositive,
    #[error("components do not cover label {0}")]
    MissingComponent(String),
}

/// Errors from parsing an element expression; columns are 1-based.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("parse error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown edge id {id:?} at column {column}")]
    UnknownEdge { column: usize, id: String },
    #[error("unknown vertex id {id:?} at column {column}")]
    UnknownVertex { column: usize, id: String },
}
