//! Any closure can be a chart. Charts without a jet implementation run on
//! finite differences through the same pipeline.

use equiaffine::blaschke::{compute_invariants, residual_report, Chart, FnChart};
use equiaffine::jet::DerivBackend;

fn main() -> equiaffine::Result<()> {
    // graph of exp(x1) + exp(x2)
    let chart = FnChart::new("exp-sum", 2, vec![(-1.0, 1.0); 2], |u: &[f64]| {
        vec![u[0], u[1], u[0].exp() + u[1].exp()]
    });
    assert!(!chart.jet_capable());
    let inv = compute_invariants(&chart, &[0.3, -0.2], &DerivBackend::finite_difference())?;
    let res = residual_report(&inv);
    println!("L1 = {:.6}, J = {:.6}, chi = {:.6}", inv.l1, inv.j, inv.chi);
    println!("Blaschke metric\n{:.6}", inv.g);
    println!("structure residual {:.1e}, distance from a hypersphere {:.1e}", res.structural_max(), res.hypersphere);
    Ok(())
}
