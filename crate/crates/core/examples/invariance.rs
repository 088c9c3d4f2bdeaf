//! Equiaffine invariants do not change under unimodular ambient maps
//! or reparametrizations of the chart.

use std::sync::Arc;

use equiaffine::blaschke::{compute_invariants, AffineImage, Chart, LinearReparam, ShearReparam};
use equiaffine::jet::DerivBackend;
use equiaffine::models::perturbed_paraboloid;

fn main() -> equiaffine::Result<()> {
    let backend = DerivBackend::jets();
    let base: Arc<dyn Chart> = Arc::new(perturbed_paraboloid(2, 0.1)?);
    let v = [0.1, -0.2];

    // determinant 1
    let unimodular = vec![vec![2.0, 0.5, 0.0], vec![0.0, 0.5, -0.3], vec![0.0, 0.0, 1.0]];
    let image = AffineImage::new(base.clone(), unimodular, vec![1.0, 2.0, 3.0])?;
    let linear = LinearReparam::new(base.clone(), vec![vec![2.0, 0.0], vec![0.3, 0.5]], vec![0.0, 0.1])?;
    let shear = ShearReparam::new(base.clone(), 0.25);

    let show = |name: &str, chart: &dyn Chart, u: &[f64]| -> equiaffine::Result<()> {
        let inv = compute_invariants(chart, u, &backend)?;
        println!("{name:>14}: L1 = {:+.12}, J = {:.12}, chi = {:+.12}", inv.l1, inv.j, inv.chi);
        Ok(())
    };
    show("original", base.as_ref(), &v)?;
    show("ambient map", &image, &v)?;
    // a reparametrized chart at w is the original chart at forward(w)
    show("linear reparam", base.as_ref(), &linear.forward(&v))?;
    show("", &linear, &v)?;
    show("shear reparam", base.as_ref(), &shear.forward(&v))?;
    show("", &shear, &v)?;
    Ok(())
}
