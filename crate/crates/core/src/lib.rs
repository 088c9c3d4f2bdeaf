//! Equiaffine invariants of hypersurface charts.
//!
//! The crate computes the Blaschke metric, affine normal, Fubini-Pick form,
//! affine shape operator and Pick invariant of a chart `x: U ⊂ Rⁿ → Rⁿ⁺¹`,
//! checks the structure equations they satisfy, builds Calabi compositions of
//! hyperbolic affine hyperspheres and provides the symmetric hypersphere
//! models (quadrics, the flat hypersphere, `SL(m,R)/SO(m)`, `SL(m,C)/SU(m)`,
//! `SU*(2m)/Sp(m)` and `E6(-26)/F4`).
//!
//! Derivatives come either from truncated Taylor arithmetic ([`jet`]) or from
//! finite differences; both feed the same pipeline in [`blaschke`].

pub mod blaschke;
pub mod calabi;
pub mod cli;
pub mod error;
pub mod jet;
pub mod jordan;
pub mod linalg;
pub mod models;
pub mod scalar;

pub use error::{Error, Result};
