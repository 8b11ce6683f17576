//! Truncated polynomial jets over `Q` and the tensors, diffeomorphisms and
//! Poisson operations built on them.

pub mod diffeo;
pub mod monomial;
pub mod order;
pub mod poisson;
pub mod poly;
pub mod random;
pub mod tensor;

pub use diffeo::{JetDiffeo, Substitution};
pub use monomial::{Monomial, MAX_VARS};
pub use order::{vanishing_order, Order, VanishingOrder};
pub use poisson::{
    compose, invert, jacobiator, poisson_bracket, pushforward, pushforward_with_inverse, schouten_jacobiator,
};
pub use poly::JetPoly;
pub use tensor::{JetBivector, JetTrivector, JetVectorField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("degree cap mismatch: {left} vs {right}")]
    CapMismatch { left: u32, right: u32 },
    #[error("variable count mismatch: {left} vs {right}")]
    VarsMismatch { left: usize, right: usize },
    #[error("{0} variables exceeds the supported maximum")]
    TooManyVars(usize),
    #[error("term of degree {degree} exceeds cap {cap}")]
    DegreeAboveCap { degree: u32, cap: u32 },
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("displacement component {component} has a term of degree {degree} < 2")]
    NotUnipotent { component: usize, degree: u32 },
}
