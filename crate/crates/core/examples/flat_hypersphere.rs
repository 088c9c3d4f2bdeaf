//! The flat hypersphere x1 x2 ... x_{n+1} = 1: vanishing curvature,
//! constant Pick invariant and negative affine mean curvature.

use equiaffine::blaschke::compute_invariants;
use equiaffine::calabi::CalabiSpec;
use equiaffine::jet::DerivBackend;
use equiaffine::models::flat_chart;

fn main() -> equiaffine::Result<()> {
    for n in 2..=4 {
        let chart = flat_chart(n, 1.0)?;
        // the flat hypersphere is the composition of n+1 points
        let (closed_form, _) = CalabiSpec::new(n + 1, vec![], vec![1.0; n + 1])?.predicted_l1();
        println!("n = {n}, closed-form L1 = {closed_form:.10}");
        for k in 0..3 {
            let u: Vec<f64> = (0..n).map(|i| 0.1 * (k + i) as f64 - 0.15).collect();
            let inv = compute_invariants(&chart, &u, &DerivBackend::jets())?;
            let r = inv.r_low.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            println!("  u = {u:?}: L1 = {:.10}, J = {:.10}, max|R| = {r:.1e}", inv.l1, inv.j);
        }
    }
    Ok(())
}
