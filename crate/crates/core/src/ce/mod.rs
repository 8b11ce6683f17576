//! Truncated Chevalley-Eilenberg complexes `W ⊗ Λ•𝔤*` over jet modules,
//! their differentials and Casimir-based homotopy operators.

pub mod cochain;
pub mod exterior;
pub mod homotopy;
pub mod module;
pub mod verify;

pub use cochain::{ce_differential, Cochain};
pub use exterior::{convention_sign, Exterior};
pub use homotopy::{homotopy, HomotopyTables, TablesCache};
pub use module::{build_module, Block, BlockKey, Layout, ModuleKind, ModuleSpec};
pub use verify::{cohomology_dims, verify_homotopy_identity, BlockCohomology, CohomologyDims, HomotopyReport, Samples};

use crate::lie::LieError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CeError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("invalid layout: {0}")]
    Layout(String),
    #[error("component {component} monomial {exponents:?} lies outside the module")]
    OutsideModule { component: usize, exponents: Vec<u32> },
    #[error("generator {generator} maps block {block:?} outside itself")]
    NotInvariant { block: BlockKey, generator: usize },
    #[error("bracket relation fails for generators ({i}, {j}) on block {block:?}")]
    Representation { block: BlockKey, i: usize, j: usize },
    #[error("{op} is undefined on cochains of degree {degree}")]
    Degree { op: &'static str, degree: usize },
    #[error("Casimir operator on block {block:?} is not semisimple at zero")]
    NonSemisimpleKernel { block: BlockKey },
    #[error("Casimir kernel on block {block:?} is not a trivial submodule")]
    KernelNotTrivial { block: BlockKey },
    #[error("cochain shape mismatch: {0}")]
    Shape(String),
}
