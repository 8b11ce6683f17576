//! Levi normalization of Poisson structures and Lie algebroids on jets.

pub mod algebroid;
pub mod identities;
pub mod normalize;
pub mod problem;
pub mod step;

pub use algebroid::{
    algebroid_problem, algebroid_structure, algebroid_to_poisson, check_fiberwise_linear, so3_transformation_algebroid, Algebroid,
};
pub use identities::StepChecks;
pub use normalize::{
    formal_step_bound, normalize, normalize_with, LeviInstance, NormalizeConfig, NormalizeOutcome, RelationsReport,
};
pub use problem::{model_bivector, project, ComponentWitness, LeviProblem};
pub use step::{error_cochains, solve_step, ErrorCochains, LeviTables, StepArtifacts};

use crate::ce::CeError;
use crate::jet::JetError;
use crate::lie::LieError;
use crate::norms::NormError;
use crate::rational::RationalString;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LeviError {
    #[error("structure data rejected: {0}")]
    Structure(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("bivector does not vanish at the origin: component {pair:?} has constant {value}")]
    NotVanishing { pair: (usize, usize), value: RationalString },
    #[error("linear part differs from the model: {0}")]
    LinearPart(ComponentWitness),
    #[error("Jacobi identity fails: component {triple:?} at exponents {exponents:?} is {value}")]
    Jacobi {
        triple: (usize, usize, usize),
        exponents: Vec<u32>,
        value: RationalString,
    },
    #[error("bivector is not fiber-wise linear at component {pair:?}")]
    NotFiberwiseLinear { pair: (usize, usize) },
    #[error("invalid algebroid: {0}")]
    Algebroid(String),
    #[error("anchor of section {section} has nonzero value {value} at the origin in coordinate {coordinate}")]
    AnchorAtOrigin {
        section: usize,
        coordinate: usize,
        value: RationalString,
    },
    #[error(transparent)]
    Ce(#[from] CeError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Norm(#[from] NormError),
}
