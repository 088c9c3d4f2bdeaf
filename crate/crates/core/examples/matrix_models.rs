//! Symmetric hyperspheres built from determinant level sets of
//! Hermitian matrices over R, C and the quaternions.

use equiaffine::blaschke::{compute_invariants, residual_report};
use equiaffine::jet::DerivBackend;
use equiaffine::models::{Family, MatrixModel};

fn main() -> equiaffine::Result<()> {
    let cases = [
        (Family::Slr, DerivBackend::jets()),
        (Family::Slc, DerivBackend::jets()),
        (Family::SuStar, DerivBackend::finite_difference()),
    ];
    for (family, backend) in cases {
        let model = MatrixModel::new(family, 3, -1.0)?;
        let origin = model.origin_crosscheck(&DerivBackend::jets())?;
        println!(
            "{} (n = {}): chart scale {:.6}, origin metric {:.1e}, cubic form {:.1e}",
            model.label(),
            model.n(),
            model.chart_scale(),
            origin.metric,
            origin.cubic
        );
        let u: Vec<f64> = (0..model.n()).map(|i| 0.08 * ((i + 1) as f64).sin()).collect();
        let inv = compute_invariants(&model.chart(), &u, &backend)?;
        let res = residual_report(&inv);
        println!(
            "  off origin: L1 = {:.8}, J = {:.6}, hypersphere {:.1e}, nabla A {:.1e}",
            inv.l1, inv.j, res.hypersphere, res.parallel_a
        );
    }
    Ok(())
}
