//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("backend mismatch in {0}")]
    BackendMismatch(&'static str),
    #[error("exact backend cannot compute {0}; use the float backend")]
    ExactUnavailable(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot differentiate by `{0}`: not a free variable")]
    NotDifferentiable(String),
    #[error("ring signature mismatch")]
    SignatureMismatch,
    #[error("interpolation nodes must be pairwise distinct: {0}")]
    DuplicateNodes(String),
    #[error("invalid injection table: {0}")]
    InvalidTable(String),
    #[error("no separating theta among {0} candidates")]
    ThetaExhausted(usize),
    #[error("orbit data incomplete: {0}")]
    IncompleteOrbit(String),
    #[error("scale step has no stored value at u = {0}")]
    ScaleOffTable(String),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("construction inapplicable: {0}")]
    ConstructionInapplicable(String),
    #[error("linear part is not scalar: {0}")]
    NonScalarLinearPart(String),
    #[error("vector field does not vanish at the base point: {0}")]
    DoesNotVanish(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
