//! Model hyperspheres: quadrics, the flat hypersphere and the symmetric
//! matrix models, plus the label catalog used by the command line.

mod catalog;
mod matrix;
mod quadric;

pub use catalog::{catalog, resolve, resolve_factor, CatalogEntry, Expectations, ResolvedModel, PERTURBATION};
pub use matrix::{inner, Family, MatrixChart, MatrixModel, OriginCrosscheck, OriginData};
pub use quadric::{flat_chart, perturbed_paraboloid, quadric_chart, FlatChart, PerturbedParaboloid, QuadricChart, QuadricKind};
