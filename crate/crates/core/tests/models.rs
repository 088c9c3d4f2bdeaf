mod common;

use equiaffine::blaschke::{compute_invariants, residual_report};
use equiaffine::jet::DerivBackend;
use equiaffine::models::{catalog, resolve, Family, MatrixModel};

#[test]
fn matrix_models_hit_their_target_curvature() {
    for (family, m, l1) in [(Family::Slr, 3, -1.0), (Family::Slr, 4, -0.5), (Family::Slc, 3, -2.0)] {
        let model = MatrixModel::new(family, m, l1).unwrap();
        let chart = model.chart();
        let u: Vec<f64> = (0..model.n()).map(|i| 0.04 * (i as f64 - 2.0)).collect();
        let oracle = common::centered_l1(&chart, &u, 1e-4);
        assert!((oracle - l1).abs() < 1e-6 * l1.abs(), "{family} m={m}: oracle {oracle}");
        let inv = compute_invariants(&chart, &u, &DerivBackend::jets()).unwrap();
        assert!((inv.l1 - l1).abs() < 1e-10);
    }
}

#[test]
fn origin_data_matches_pipeline() {
    for family in [Family::Slr, Family::Slc] {
        let cc = MatrixModel::new(family, 3, -1.0).unwrap().origin_crosscheck(&DerivBackend::jets()).unwrap();
        assert!(cc.metric < 1e-10 && cc.cubic < 1e-10 && cc.gauss < 1e-10, "{family}: {cc:?}");
    }
    let cc = MatrixModel::new(Family::SuStar, 3, -1.0)
        .unwrap()
        .origin_crosscheck(&DerivBackend::finite_difference())
        .unwrap();
    assert!(cc.metric < 1e-4 && cc.cubic < 1e-3 && cc.gauss < 1e-3, "{cc:?}");
}

#[test]
fn sustar_jets_and_fd_agree() {
    let model = MatrixModel::new(Family::SuStar, 3, -1.0).unwrap();
    let chart = model.chart();
    let u: Vec<f64> = (0..model.n()).map(|i| 0.02 * (i as f64).sin()).collect();
    let a = compute_invariants(&chart, &u, &DerivBackend::jets()).unwrap();
    let b = compute_invariants(&chart, &u, &DerivBackend::finite_difference()).unwrap();
    assert!((a.l1 + 1.0).abs() < 1e-10);
    assert!((a.l1 - b.l1).abs() < 1e-5 && (a.j - b.j).abs() < 1e-5);
}

#[test]
fn printed_constants_are_self_consistent() {
    for family in [Family::Slr, Family::Slc, Family::SuStar] {
        for m in 3..6 {
            for l1 in [-1.0, -0.25, -3.0] {
                let model = MatrixModel::new(family, m, l1).unwrap();
                assert!(model.constant_audit() < 1e-12 * model.metric_factor(), "{family} {m} {l1}");
            }
        }
    }
}

#[test]
fn group_audits() {
    for family in [Family::Slr, Family::Slc, Family::SuStar] {
        let model = MatrixModel::new(family, 3, -1.0).unwrap();
        assert!(model.traceless_audit() < 1e-10);
        assert!(model.unimodularity_audit(10, 2) < 1e-10);
    }
}

#[test]
fn invalid_models() {
    assert!(MatrixModel::new(Family::Slr, 2, -1.0).is_err());
    assert!(MatrixModel::new(Family::Slc, 3, 0.0).is_err());
}

#[test]
fn catalog_entries_meet_their_expectations() {
    let tol = 1e-8;
    for entry in catalog().into_iter().filter(|e| e.backend == "jets") {
        let m = resolve(&entry.label).unwrap();
        let u: Vec<f64> = m.chart.domain().iter().map(|(a, b)| 0.3 * a + 0.7 * b).collect();
        let inv = compute_invariants(m.chart.as_ref(), &u, &DerivBackend::jets()).unwrap();
        let res = residual_report(&inv);
        assert!(res.structural_max() < tol, "{}: {res:?}", entry.label);
        assert_eq!(res.hypersphere < tol, m.expect.hypersphere, "{}", entry.label);
        assert_eq!(res.parallel_a < tol, m.expect.parallel, "{}", entry.label);
        if let Some(l1) = m.expect.l1 {
            assert!((inv.l1 - l1).abs() < tol, "{}: {} vs {l1}", entry.label, inv.l1);
        }
    }
}

#[test]
fn catalog_is_stable() {
    let a: Vec<String> = catalog().into_iter().map(|e| e.label).collect();
    let b: Vec<String> = catalog().into_iter().map(|e| e.label).collect();
    assert_eq!(a, b);
}
