//! Exact-arithmetic engine for Nijenhuis algebras over the rationals:
//! structure verification, deformation cohomology of operators and algebras,
//! abelian extensions, Wells obstructions for automorphism inducibility, and
//! 2-term / truncated homotopy structures.

pub mod algebra;
pub mod error;
pub mod fixtures;
pub mod homotopy;
pub mod cli;
pub mod complexes;
pub mod defext;
pub mod doc;
pub mod linalg;
pub mod nsalg;
pub mod report;
pub mod signs;
pub mod tensor;
pub mod scalar;

pub use error::{EngineError, Result};
