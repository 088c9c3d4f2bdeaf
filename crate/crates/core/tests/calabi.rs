mod common;

use std::sync::Arc;

use equiaffine::blaschke::{compute_invariants, residual_report, Chart};
use equiaffine::calabi::{l1_audit, normalization_equivalence_audit, CalabiSpec, FactorSpec};
use equiaffine::jet::DerivBackend;
use equiaffine::models::{quadric_chart, Family, MatrixModel, QuadricKind};

fn hyperboloid(n: usize) -> FactorSpec {
    FactorSpec::new(Arc::new(quadric_chart(QuadricKind::Hyperboloid(1.0), n).unwrap()), -1.0).unwrap()
}

fn slr3() -> FactorSpec {
    FactorSpec::new(MatrixModel::new(Family::Slr, 3, -1.0).unwrap().into_chart(), -1.0).unwrap()
}

fn sample(spec: &CalabiSpec) -> Vec<f64> {
    (0..spec.dim()).map(|i| 0.15 * ((i as f64) * 1.3 + 0.4).sin()).collect()
}

#[test]
fn closed_form_matches_the_centered_oracle() {
    let specs = [
        CalabiSpec::new(2, vec![], vec![1.0, 2.0]).unwrap(),
        CalabiSpec::new(3, vec![], vec![1.0, 1.0, 1.0]).unwrap(),
        CalabiSpec::new(1, vec![hyperboloid(2)], vec![1.3, 0.7]).unwrap(),
        CalabiSpec::new(0, vec![hyperboloid(2), hyperboloid(3)], vec![1.0, 1.5]).unwrap(),
        CalabiSpec::new(1, vec![hyperboloid(2), slr3()], vec![1.0, 1.2, 0.8]).unwrap(),
    ];
    for spec in &specs {
        let chart = spec.build_composition();
        let u = sample(spec);
        let oracle = common::centered_l1(&chart, &u, 1e-4);
        let (predicted, _) = spec.predicted_l1();
        assert!((predicted - oracle).abs() < 1e-6 * predicted.abs(), "{}: {predicted} vs {oracle}", spec.label());
    }
}

#[test]
fn compositions_are_symmetric_hyperspheres() {
    let spec = CalabiSpec::new(0, vec![hyperboloid(2), slr3()], vec![0.9, 1.1]).unwrap();
    let inv = compute_invariants(&spec.build_composition(), &sample(&spec), &DerivBackend::jets()).unwrap();
    let res = residual_report(&inv);
    assert!(res.symmetric_hypersphere_max() < 1e-9, "{res:?}");
    assert!((inv.l1 - spec.predicted_l1().0).abs() < 1e-10);
}

#[test]
fn point_compositions_lie_on_the_product_level_set() {
    let spec = CalabiSpec::new(4, vec![], vec![1.0; 4]).unwrap();
    let chart = spec.build_composition();
    for u in [[0.1, -0.2, 0.3], [0.0, 0.0, 0.0], [-0.3, 0.25, 0.05]] {
        let x = chart.eval(&u).unwrap();
        assert!((x.iter().product::<f64>() - 1.0).abs() < 1e-14);
    }
    let inv = compute_invariants(&chart, &[0.1, -0.2, 0.3], &DerivBackend::jets()).unwrap();
    assert!(common::max_abs(inv.r_low.iter()) < 1e-10);
    assert!(inv.j > 0.0);
}

#[test]
fn doubling_a_point_constant() {
    // L₁ ∝ C⁻¹ with C ∝ (c₁²)^{1/(n+2)}
    let a = CalabiSpec::new(3, vec![], vec![1.0, 1.0, 1.0]).unwrap();
    let b = CalabiSpec::new(3, vec![], vec![2.0, 1.0, 1.0]).unwrap();
    let ratio = b.predicted_l1().0 / a.predicted_l1().0;
    assert!((ratio - 4f64.powf(-0.25)).abs() < 1e-14);
    let u = [0.1, 0.2];
    let na = compute_invariants(&a.build_composition(), &u, &DerivBackend::jets()).unwrap().l1;
    let nb = compute_invariants(&b.build_composition(), &u, &DerivBackend::jets()).unwrap().l1;
    assert!((nb / na - ratio).abs() < 1e-10);
}

#[test]
fn audit_reports() {
    let spec = CalabiSpec::new(1, vec![hyperboloid(2)], vec![1.3, 0.7]).unwrap();
    let u = [0.1, 0.2, -0.1];
    let audit = l1_audit(&spec, &u, &DerivBackend::jets()).unwrap();
    assert_eq!(audit.f, vec![1.0, 4.0]);
    assert!(audit.error < 1e-10);
    assert!(audit.weight_balance < 1e-15);
    let fd = l1_audit(&spec, &u, &DerivBackend::finite_difference()).unwrap();
    assert!(fd.error < 1e-4);
}

#[test]
fn normalizations_share_invariants() {
    let points = CalabiSpec::new(2, vec![], vec![1.0, 3.0]).unwrap();
    let rep = normalization_equivalence_audit(&points, &[0.2], &DerivBackend::jets()).unwrap();
    assert!(rep.max_spread < 1e-10, "{rep:?}");
    let mixed = CalabiSpec::new(1, vec![hyperboloid(2)], vec![1.3, 0.7]).unwrap();
    let u = [0.1, 0.2, -0.1];
    let rep = normalization_equivalence_audit(&mixed, &u, &DerivBackend::jets()).unwrap();
    assert!(rep.max_spread < 1e-5, "{rep:?}");
    let again = normalization_equivalence_audit(&mixed, &u, &DerivBackend::jets()).unwrap();
    assert_eq!(format!("{rep:?}"), format!("{again:?}"));
}

#[test]
fn factors_are_validated() {
    let good = hyperboloid(2);
    assert!(good.validate(&DerivBackend::jets(), 1e-8).is_ok());
    // right surface, wrong curvature
    let wrong_l1 = FactorSpec::new(good.chart.clone(), -2.0).unwrap();
    assert!(wrong_l1.validate(&DerivBackend::jets(), 1e-8).is_err());
    // a hyperboloid translated off the origin is no longer centered
    let shifted = equiaffine::blaschke::AffineImage::new(
        good.chart.clone(),
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        vec![0.0, 0.0, 0.5],
    )
    .unwrap();
    let off = FactorSpec::new(Arc::new(shifted), -1.0).unwrap();
    assert!(off.validate(&DerivBackend::jets(), 1e-8).is_err());
}
