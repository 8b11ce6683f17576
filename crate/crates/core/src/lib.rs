//! Exact jet-level Levi decomposition of Poisson structures and Lie
//! algebroids.
//!
//! The crate is layered bottom-up:
//! - [`rational`], [`linalg`]: exact scalars and matrices;
//! - [`lie`]: structure constants, Killing form, Casimir operators;
//! - [`jet`]: truncated polynomials, bivectors, jet diffeomorphisms;
//! - [`ce`]: Chevalley-Eilenberg complexes and their homotopy operators;
//! - [`schedule`], [`norms`]: iteration constants, norm families, smoothing;
//! - [`nash_moser`]: the generic normalization loop;
//! - [`levi`]: the Levi normal form instance and the algebroid mode;
//! - [`io`]: problem files, reports and command entry points.

pub mod ce;
pub mod io;
pub mod jet;
pub mod lie;
pub mod levi;
pub mod linalg;
pub mod nash_moser;
pub mod norms;
pub mod rational;
pub mod schedule;

pub use jet::{JetBivector, JetDiffeo, JetPoly, JetTrivector, JetVectorField, Monomial, Order};
pub use lie::{StructureData, ValidationReport};
pub use rational::Q;
