//! The exceptional 26-dimensional hypersphere: octonions, the Albert
//! algebra determinant, and the full pipeline on finite differences.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use equiaffine::jet::DerivBackend;
use equiaffine::jordan::{det, det_invariance_audit, E6Model, JordanElement, Octonion};

fn main() -> equiaffine::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (a, b) = (Octonion::random(&mut rng), Octonion::random(&mut rng));
    println!("|ab| - |a||b| = {:.1e}", (a * b).norm() - a.norm() * b.norm());
    println!("(ab)a - a(ba) = {:.1e}", ((a * b) * a - a * (b * a)).norm());

    let x = JordanElement::random(&mut rng);
    let t = JordanElement::random_traceless(&mut rng);
    let audit = det_invariance_audit(&t, &x)?;
    println!("det X = {:.6}, derivative of det along exp(sL_T) {:.1e}", det(&x), audit.max());

    let model = E6Model::new(-1.0)?;
    println!("constant audit {:.1e}, traceless map {:.1e}", model.constant_audit(), model.traceless_map_audit());
    let started = Instant::now();
    let cc = model.crosscheck(&vec![0.0; 26], &DerivBackend::finite_difference())?;
    println!(
        "origin: L1 = {:.7}, hypersphere {:.1e}, xi + L1 x {:.1e}, metric {:.1e}, cubic {:.1e} ({:.1?})",
        cc.l1,
        cc.hypersphere,
        cc.center,
        cc.metric,
        cc.cubic,
        started.elapsed()
    );
    Ok(())
}
