//! Equiaffine invariants of the three quadric types.
//!
//! Run with `cargo run --example quadrics`.

use equiaffine::blaschke::{compute_invariants, residual_report};
use equiaffine::jet::DerivBackend;
use equiaffine::models::{quadric_chart, QuadricKind};

fn main() -> equiaffine::Result<()> {
    let backend = DerivBackend::jets();
    let u = [0.2, -0.1, 0.3];
    for kind in [QuadricKind::Ellipsoid(1.0), QuadricKind::Paraboloid, QuadricKind::Hyperboloid(1.0)] {
        let chart = quadric_chart(kind, 3)?;
        let inv = compute_invariants(&chart, &u, &backend)?;
        let res = residual_report(&inv);
        let cubic = inv.a_low.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!(
            "{kind:?}: L1 = {:+.6}, J = {:.2e}, max|A| = {cubic:.1e}, |B - L1 g| = {:.1e}",
            inv.l1, inv.j, res.hypersphere
        );
        println!("    affine normal {:.6}", inv.xi);
    }
    Ok(())
}
