use ndarray::{Array2, Array3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{det, exp_action, jordan_product, traceless_basis, JordanElement, DIM};
use crate::blaschke::{compute_invariants, hypersphere_gauss_residual, residual_report, Chart};
use crate::error::{Error, Result};
use crate::jet::DerivBackend;

/// The hypersphere `E₆₍₋₂₆₎/F₄ ⊂ 𝔍 ≅ R²⁷` with prescribed `L₁ < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E6Model {
    pub l1: f64,
}

/// Metric and cubic form at `I₃` in the basis [`traceless_basis`].
#[derive(Debug, Clone)]
pub struct E6OriginData {
    pub basis: Vec<JordanElement>,
    pub g_o: Array2<f64>,
    pub a_o: Array3<f64>,
}

/// Full pipeline at one chart point against the algebraic predictions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct E6Crosscheck {
    pub l1: f64,
    /// `max |B − L₁g|`
    pub hypersphere: f64,
    /// `max |ξ + L₁x|`
    pub center: f64,
    /// Hypersphere Gauss equation.
    pub gauss: f64,
    /// Only meaningful at the origin: distance to [`E6OriginData`].
    pub metric: f64,
    pub cubic: f64,
}

impl E6Model {
    pub fn new(l1: f64) -> Result<Self> {
        if !(l1 < 0.0) || !l1.is_finite() {
            return Err(Error::InvalidSpec(format!("e6f4 needs L1 < 0, got {l1}")));
        }
        Ok(E6Model { l1 })
    }

    pub fn label(&self) -> String {
        "e6f4".into()
    }

    pub fn n(&self) -> usize {
        DIM - 1
    }

    /// `C = √3(−3L₁)^{−14}`
    pub fn printed_constant(&self) -> f64 {
        3f64.sqrt() * (-3.0 * self.l1).powi(-14)
    }

    /// `−1/(3L₁)`, the factor in `g_o = γ·(X, Y)`.
    pub fn metric_factor(&self) -> f64 {
        -1.0 / (3.0 * self.l1)
    }

    /// Scale `κ` of the chart `κ·exp(L_U)I₃` with `κ²⁷ = C`: the frame
    /// determinant per unit tangent volume, as for the matrix models.
    pub fn chart_scale(&self) -> f64 {
        self.printed_constant().powf(1.0 / DIM as f64)
    }

    /// `|(C/√3)^{1/14} − γ|`
    pub fn constant_audit(&self) -> f64 {
        ((self.printed_constant() / 3f64.sqrt()).powf(1.0 / 14.0) - self.metric_factor()).abs()
    }

    pub fn origin_data(&self) -> E6OriginData {
        let basis = traceless_basis();
        let n = basis.len();
        let gamma = self.metric_factor();
        let g_o = Array2::from_shape_fn((n, n), |(i, j)| gamma * basis[i].inner(&basis[j]));
        let prods: Vec<Vec<JordanElement>> = basis
            .iter()
            .map(|x| basis.iter().map(|y| jordan_product(x, y)).collect())
            .collect();
        let a_o = Array3::from_shape_fn((n, n, n), |(i, j, k)| {
            let xy = &prods[i][j];
            let t = JordanElement::identity().scale(xy.trace() / 3.0);
            gamma * xy.sub(&t).inner(&basis[k])
        });
        E6OriginData { basis, g_o, a_o }
    }

    /// `max_X |tr(Y ↦ X∘Y − ⅓tr(X∘Y)I)|` on `𝔍₀` over the basis.
    pub fn traceless_map_audit(&self) -> f64 {
        let basis = traceless_basis();
        basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| {
                        let xy = jordan_product(x, y);
                        xy.sub(&JordanElement::identity().scale(xy.trace() / 3.0)).inner(y)
                    })
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation of `A_o(X, Y, Z)` under permutations of random traceless triples.
    pub fn symmetry_audit(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = self.metric_factor();
        let a = |x: &JordanElement, y: &JordanElement, z: &JordanElement| {
            let xy = jordan_product(x, y);
            gamma * xy.sub(&JordanElement::identity().scale(xy.trace() / 3.0)).inner(z)
        };
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let x = JordanElement::random_traceless(&mut rng);
            let y = JordanElement::random_traceless(&mut rng);
            let z = JordanElement::random_traceless(&mut rng);
            let v = a(&x, &y, &z);
            for w in [a(&x, &z, &y), a(&y, &x, &z), a(&y, &z, &x), a(&z, &x, &y), a(&z, &y, &x)] {
                worst = worst.max((v - w).abs());
            }
        }
        worst
    }

    pub fn chart(&self) -> E6Chart {
        self.chart_with_scale(self.chart_scale())
    }

    pub fn chart_with_scale(&self, kappa: f64) -> E6Chart {
        E6Chart {
            model: *self,
            kappa,
            basis: traceless_basis(),
        }
    }

    /// Runs the finite-difference pipeline at `u`. Each call costs a few
    /// hundred thousand chart evaluations.
    pub fn crosscheck(&self, u: &[f64], backend: &DerivBackend) -> Result<E6Crosscheck> {
        let chart = self.chart();
        let inv = compute_invariants(&chart, u, backend)?;
        let res = residual_report(&inv);
        let od = self.origin_data();
        let center = (&inv.xi + &(&inv.x * inv.l1)).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let metric = (&inv.g - &od.g_o).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cubic = (&inv.a_low - &od.a_o).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(E6Crosscheck {
            l1: inv.l1,
            hypersphere: res.hypersphere,
            center,
            gauss: hypersphere_gauss_residual(&inv),
            metric,
            cubic,
        })
    }
}

pub fn e6_chart(l1: f64) -> Result<E6Chart> {
    Ok(E6Model::new(l1)?.chart())
}

/// `u ↦ κ·exp(L_U)I₃` with `U = Σuᵏ B_k` over [`traceless_basis`].
#[derive(Debug, Clone)]
pub struct E6Chart {
    model: E6Model,
    kappa: f64,
    basis: Vec<JordanElement>,
}

impl E6Chart {
    pub fn model(&self) -> &E6Model {
        &self.model
    }

    pub fn scale(&self) -> f64 {
        self.kappa
    }

    pub fn point(&self, u: &[f64]) -> Result<JordanElement> {
        if u.len() != self.basis.len() {
            return Err(Error::ShapeMismatch(format!("e6f4 chart takes 26 parameters, got {}", u.len())));
        }
        let mut t = JordanElement::zero();
        for (uk, b) in u.iter().zip(&self.basis) {
            t = t.add(&b.scale(*uk));
        }
        Ok(exp_action(&t, &JordanElement::identity(), 1.0).scale(self.kappa))
    }

    /// `det(x(u)/κ)`, identically one.
    pub fn normalized_det(&self, u: &[f64]) -> Result<f64> {
        Ok(det(&self.point(u)?.scale(1.0 / self.kappa)))
    }
}

impl Chart for E6Chart {
    fn label(&self) -> String {
        self.model.label()
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        vec![(-0.3, 0.3); self.basis.len()]
    }

    fn eval(&self, u: &[f64]) -> Result<Vec<f64>> {
        Ok(self.point(u)?.coords().to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let m = E6Model::new(-1.0).unwrap();
        assert!(m.constant_audit() < 1e-12);
        assert!((m.metric_factor() - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.chart_scale().powi(27) - m.printed_constant()).abs() < 1e-12 * m.printed_constant());
        assert!(E6Model::new(0.0).is_err());
    }

    #[test]
    fn chart_at_origin() {
        let m = E6Model::new(-0.5).unwrap();
        let chart = m.chart();
        let x0 = chart.eval(&[0.0; 26]).unwrap();
        let k = chart.scale();
        assert_eq!(&x0[..3], &[k, k, k]);
        assert!(x0[3..].iter().all(|v| *v == 0.0));
        // tangent along u_k is κ·B_k
        let h = 1e-6;
        let basis = traceless_basis();
        for idx in [0, 1, 5, 20] {
            let mut u = [0.0; 26];
            u[idx] = h;
            let plus = chart.eval(&u).unwrap();
            u[idx] = -h;
            let minus = chart.eval(&u).unwrap();
            let want = basis[idx].scale(k).coords();
            for c in 0..DIM {
                assert!(((plus[c] - minus[c]) / (2.0 * h) - want[c]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn chart_stays_on_unit_determinant() {
        let chart = E6Model::new(-1.0).unwrap().chart();
        let u: Vec<f64> = (0..26).map(|i| 0.25 * ((i as f64) * 0.9).sin()).collect();
        assert!((chart.normalized_det(&u).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn origin_data_shape() {
        let m = E6Model::new(-1.0).unwrap();
        let od = m.origin_data();
        assert_eq!(od.g_o.dim(), (26, 26));
        // A_o(X, X, X) ∝ tr(X³) vanishes for X = diag(1, 0, −1)/√2
        let x = JordanElement::diag(1.0, 0.0, -1.0);
        let xx = jordan_product(&x, &x);
        let v = xx.sub(&JordanElement::identity().scale(xx.trace() / 3.0)).inner(&x);
        assert!(v.abs() < 1e-15);
        assert!(m.traceless_map_audit() < 1e-12);
        assert!(m.symmetry_audit(10, 1) < 1e-12);
    }
}
