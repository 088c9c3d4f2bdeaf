//! Calabi composition of a point, a two-dimensional hyperboloid and the
//! SL(3,R) model, checked against the closed-form mean curvature.

use std::sync::Arc;

use equiaffine::blaschke::{compute_invariants, residual_report};
use equiaffine::calabi::{l1_audit, normalization_equivalence_audit, CalabiSpec, FactorSpec};
use equiaffine::jet::DerivBackend;
use equiaffine::models::{quadric_chart, Family, MatrixModel, QuadricKind};

fn main() -> equiaffine::Result<()> {
    let backend = DerivBackend::jets();
    let hyperboloid = FactorSpec::new(Arc::new(quadric_chart(QuadricKind::Hyperboloid(1.0), 2)?), -1.0)?;
    let slr = FactorSpec::new(MatrixModel::new(Family::Slr, 3, -1.0)?.into_chart(), -1.0)?;
    let spec = CalabiSpec::new(1, vec![hyperboloid, slr], vec![1.0, 1.2, 0.8])?;

    let (l1, c) = spec.predicted_l1();
    println!("{}: n = {}, f = {:?}", spec.label(), spec.dim(), spec.f_indices());
    println!("predicted L1 = {l1:.12} (C = {c:.6})");

    let chart = spec.build_composition();
    let u = vec![0.05; spec.dim()];
    let inv = compute_invariants(&chart, &u, &backend)?;
    let res = residual_report(&inv);
    println!("numeric   L1 = {:.12}, hypersphere {:.1e}, nabla A {:.1e}", inv.l1, res.hypersphere, res.parallel_a);

    let audit = l1_audit(&spec, &u, &backend)?;
    println!("audit error {:.1e}, weight balance {:.1e}", audit.error, audit.weight_balance);

    let eq = normalization_equivalence_audit(&spec, &u, &backend)?;
    for row in &eq.rows {
        println!("  {:<8} c = {:.6?}: L1 = {:.12}, J = {:.12}, chi = {:+.12}", row.name, row.c, row.l1, row.j, row.chi);
    }
    println!("normalization spread {:.1e}", eq.max_spread);
    Ok(())
}
