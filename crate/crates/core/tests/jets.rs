use equiaffine::jet::{fd_taylor, DerivBackend, Jet, JetContext, MultiIndex};
use proptest::prelude::*;

fn point3() -> impl Strategy<Value = [f64; 3]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_of_linear_form_has_closed_form_coefficients(a in point3(), p in point3()) {
        // exp(a·u) at p: coefficient of u^α is e^{a·p} a^α / α!
        let ctx = JetContext::get(3, 4).unwrap();
        let u = Jet::seed_point(&p, &ctx).unwrap();
        let lin = &(&u[0].scale_coeff(a[0]) + &u[1].scale_coeff(a[1])) + &u[2].scale_coeff(a[2]);
        let e = lin.exp();
        let base = (a[0] * p[0] + a[1] * p[1] + a[2] * p[2]).exp();
        for mi in ctx.indices() {
            let want = base * mi.0.iter().zip(&a).map(|(&k, &ai)| ai.powi(k as i32)).product::<f64>() / mi.factorial();
            prop_assert!((e.coeff(mi).unwrap() - want).abs() < 1e-12 * base.max(1.0));
        }
    }

    #[test]
    fn product_rule(p in point3(), c in -2.0f64..2.0) {
        let ctx = JetContext::get(3, 4).unwrap();
        let u = Jet::seed_point(&p, &ctx).unwrap();
        let f = (&u[0] * &u[1]).exp();
        let g = &(&u[2] * &u[2]) + &Jet::constant(&ctx, c);
        for var in 0..3 {
            let lhs = (&f * &g).derivative(var);
            let rhs = &(&f.derivative(var) * &g.truncate(3)) + &(&f.truncate(3) * &g.derivative(var));
            for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn reciprocal_and_powers_invert(p in point3(), q in 0.2f64..3.0) {
        let ctx = JetContext::get(3, 4).unwrap();
        let u = Jet::seed_point(&p, &ctx).unwrap();
        let a = &(&(&u[0] * &u[0]) + &(&u[1] * &u[2])) + &Jet::constant(&ctx, 2.5);
        let one = &a * &a.recip();
        prop_assert!((one.value() - 1.0).abs() < 1e-12);
        prop_assert!(one.coeffs()[1..].iter().all(|v| v.abs() < 1e-11));
        let back = a.pow_real(q).unwrap().pow_real(1.0 / q).unwrap();
        for (x, y) in back.coeffs().iter().zip(a.coeffs()) {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn finite_differences_recover_taylor_coefficients(p in point3()) {
        let f = |x: &[f64]| vec![(x[0] - 0.5 * x[1]).sin() * (0.3 * x[2]).exp()];
        let fd = fd_taylor(&f, &p, 4, &DerivBackend::finite_difference()).unwrap();
        let ctx = JetContext::get(3, 4).unwrap();
        let u = Jet::seed_point(&p, &ctx).unwrap();
        // sin via Im exp(i·) is not available on real jets; build it from the series instead
        let arg = &u[0] - &u[1].scale_coeff(0.5);
        let s0 = arg.value();
        let series: Vec<f64> = (0..=4).map(|k| {
            let d = match k % 4 { 0 => s0.sin(), 1 => s0.cos(), 2 => -s0.sin(), _ => -s0.cos() };
            d / (1..=k).map(|i| i as f64).product::<f64>()
        }).collect();
        let exact = &arg.compose_series(&series) * &u[2].scale_coeff(0.3).exp();
        for (x, y) in fd[0].coeffs().iter().zip(exact.coeffs()) {
            prop_assert!((x - y).abs() < 1e-5);
        }
    }
}

#[test]
fn truncation_is_a_prefix() {
    let ctx = JetContext::get(2, 4).unwrap();
    let u = Jet::seed_point(&[0.3, -0.1], &ctx).unwrap();
    let f = (&u[0] * &u[1]).exp();
    let t = f.truncate(2);
    assert_eq!(t.max_degree(), 2);
    assert_eq!(t.coeffs(), &f.coeffs()[..t.coeffs().len()]);
    assert_eq!(t.coeff(&MultiIndex(vec![1, 1])).unwrap(), f.coeff(&MultiIndex(vec![1, 1])).unwrap());
}

#[test]
fn mixed_contexts_are_rejected() {
    let a = Jet::constant(&JetContext::get(2, 4).unwrap(), 1.0);
    let b = Jet::constant(&JetContext::get(3, 4).unwrap(), 1.0);
    assert!(a.try_mul(&b).is_err());
}
