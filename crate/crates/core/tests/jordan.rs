use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use equiaffine::jordan::{
    cross, det, det_invariance_audit, e6_chart, e6_trace_audit, jordan_product, mult_operator, traceless_basis,
    E6Model, JordanElement, Octonion,
};

#[test]
fn moufang_identity() {
    // (a b a) c = a (b (a c)); holds in every alternative algebra
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let (a, b, c) = (Octonion::random(&mut rng), Octonion::random(&mut rng), Octonion::random(&mut rng));
        let lhs = ((a * b) * a) * c;
        let rhs = a * (b * (a * c));
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn trace_form_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..20 {
        let x = JordanElement::random(&mut rng);
        let y = JordanElement::random(&mut rng);
        let z = JordanElement::random(&mut rng);
        let lhs = jordan_product(&jordan_product(&x, &y), &z).trace();
        let rhs = jordan_product(&x, &jordan_product(&y, &z)).trace();
        assert!((lhs - rhs).abs() < 1e-10);
    }
}

#[test]
fn real_diagonal_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let x = JordanElement::random(&mut rng);
        let d = JordanElement::diag(x.xi[0], x.xi[1], x.xi[2]);
        assert!((det(&d) - x.xi.iter().product::<f64>()).abs() < 1e-14);
    }
}

#[test]
fn adjoint_identity() {
    // (X×X)×(X×X) = det(X)·X, the cubic Jordan algebra adjoint identity
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..10 {
        let x = JordanElement::random(&mut rng);
        let xs = cross(&x, &x);
        let lhs = cross(&xs, &xs);
        assert!(lhs.sub(&x.scale(det(&x))).norm() < 1e-11);
    }
}

#[test]
fn e6_algebra_audits() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    assert!(e6_trace_audit(&JordanElement::diag(1.0, 0.0, -1.0)).unwrap() < 1e-12);
    let mut off = JordanElement::zero();
    off.x[1] = Octonion::random(&mut rng);
    assert!(e6_trace_audit(&off).unwrap() < 1e-12);
    for _ in 0..20 {
        let t = JordanElement::random_traceless(&mut rng);
        assert!(e6_trace_audit(&t).unwrap() < 1e-10);
        let x = JordanElement::random(&mut rng);
        let audit = det_invariance_audit(&t, &x).unwrap();
        assert!(audit.max() < 1e-8 * (1.0 + audit.det.abs()), "{audit:?}");
    }
    // at I₃ the gradient of det is I₃, orthogonal to 𝔍₀
    let t = JordanElement::random_traceless(&mut rng);
    assert!(det_invariance_audit(&t, &JordanElement::identity()).unwrap().gradient.abs() < 1e-14);
}

#[test]
fn non_traceless_flow_changes_det() {
    let x = JordanElement::diag(1.0, 2.0, 3.0);
    let t = JordanElement::identity().scale(0.1);
    let l = mult_operator(&t);
    assert!((l.trace().unwrap() - 2.7).abs() < 1e-12);
    assert!(det_invariance_audit(&t, &x).is_err());
}

#[test]
fn e6_origin_data() {
    let m = E6Model::new(-1.0).unwrap();
    assert!(m.constant_audit() < 1e-12);
    assert!(((m.printed_constant() / 3f64.sqrt()).powf(1.0 / 14.0) - 1.0 / 3.0).abs() < 1e-12);
    let od = m.origin_data();
    for i in 0..26 {
        for j in 0..26 {
            let want = if i == j { 1.0 / 3.0 } else { 0.0 };
            assert!((od.g_o[[i, j]] - want).abs() < 1e-15);
            for k in 0..26 {
                assert!((od.a_o[[i, j, k]] - od.a_o[[j, k, i]]).abs() < 1e-12);
                assert!((od.a_o[[i, j, k]] - od.a_o[[j, i, k]]).abs() < 1e-12);
            }
        }
    }
    assert!(m.symmetry_audit(20, 3) < 1e-10);
    assert!(m.traceless_map_audit() < 1e-10);
}

#[test]
fn e6_chart_is_unimodular() {
    let chart = e6_chart(-1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..5 {
        let u: Vec<f64> = (0..26).map(|_| rand::Rng::random_range(&mut rng, -0.3..0.3)).collect();
        assert!((chart.normalized_det(&u).unwrap() - 1.0).abs() < 1e-8);
    }
    assert_eq!(traceless_basis().len(), 26);
}
