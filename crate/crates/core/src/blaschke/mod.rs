//! Equiaffine invariants of a hypersurface chart and the residuals of the
//! structure equations they satisfy.
//!
//! The pipeline runs entirely in Taylor arithmetic on the degree-4 jets of
//! the chart. With the finite-difference backend those jets are estimated
//! numerically first; everything downstream is shared.
//!
//! Conventions: `h_{ij} = det(x₁, …, xₙ, x_{ij})`, negated if needed to be
//! positive definite; `g = H^{-1/(n+2)}h`; the curvature tensor is
//! `R_{ijkl} = g(R(eᵢ, eⱼ)eₖ, eₗ)` with `R(X, Y) = [∇_X, ∇_Y] − ∇_{[X,Y]}`,
//! so a space of constant curvature `c` has `R_{ijkl} = c(g_{il}g_{jk} − g_{ik}g_{jl})`.

mod chart;
mod pipeline;
mod residual;

pub use chart::{AffineImage, Chart, FnChart, LinearReparam, ShearReparam, SmoothMap};
pub use pipeline::{
    affine_normal, blaschke_metric, compute_invariants, covariant_derivative_a, curvature_tensor,
    fundamental_form, invariants_from_taylor, pick_and_chi, raise_last, taylor_jets, PointInvariants,
};
pub use residual::{hypersphere_gauss_residual, residual_report, ResidualReport};
