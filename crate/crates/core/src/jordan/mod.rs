//! Octonions, the exceptional Jordan algebra `𝔍` of octonionic Hermitian
//! 3×3 matrices, and the `E₆₍₋₂₆₎/F₄` hypersphere built on it.
//!
//! Coordinates on `𝔍` are `(ξ₁, ξ₂, ξ₃, √2·x₁, √2·x₂, √2·x₃)` with each `xᵢ`
//! expanded in `1, e₁, …, e₇`, 27 reals in all. They are orthonormal for
//! `(X, Y) = tr(X∘Y)`, so the matrix of a self-adjoint operator is symmetric.

mod e6;
mod octonion;

use rand::Rng;

pub use e6::{e6_chart, E6Chart, E6Crosscheck, E6Model, E6OriginData};
pub use octonion::{octonion_mul, Octonion};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Real dimension of `𝔍`.
pub const DIM: usize = 27;

/// `X = [[ξ₁, x₃, x̄₂], [x̄₃, ξ₂, x₁], [x₂, x̄₁, ξ₃]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JordanElement {
    pub xi: [f64; 3],
    pub x: [Octonion; 3],
}

type OMat = [[Octonion; 3]; 3];

impl JordanElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0, 1.0)
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        JordanElement {
            xi: [a, b, c],
            x: [Octonion::ZERO; 3],
        }
    }

    fn to_matrix(self) -> OMat {
        let [x1, x2, x3] = self.x;
        let r = Octonion::real;
        [
            [r(self.xi[0]), x3, x2.conj()],
            [x3.conj(), r(self.xi[1]), x1],
            [x2, x1.conj(), r(self.xi[2])],
        ]
    }

    pub fn trace(&self) -> f64 {
        self.xi.iter().sum()
    }

    pub fn coords(&self) -> [f64; DIM] {
        let mut c = [0.0; DIM];
        c[..3].copy_from_slice(&self.xi);
        for (i, o) in self.x.iter().enumerate() {
            for k in 0..8 {
                c[3 + 8 * i + k] = std::f64::consts::SQRT_2 * o.0[k];
            }
        }
        c
    }

    pub fn from_coords(c: &[f64]) -> Result<Self> {
        if c.len() != DIM {
            return Err(Error::ShapeMismatch(format!("expected {DIM} coordinates, got {}", c.len())));
        }
        let mut x = [Octonion::ZERO; 3];
        for (i, o) in x.iter_mut().enumerate() {
            for k in 0..8 {
                o.0[k] = c[3 + 8 * i + k] / std::f64::consts::SQRT_2;
            }
        }
        Ok(JordanElement {
            xi: [c[0], c[1], c[2]],
            x,
        })
    }

    /// The `k`-th coordinate basis element.
    pub fn coordinate_basis(k: usize) -> Self {
        let mut c = [0.0; DIM];
        c[k] = 1.0;
        Self::from_coords(&c).expect("fixed length")
    }

    pub fn scale(&self, s: f64) -> Self {
        JordanElement {
            xi: self.xi.map(|v| v * s),
            x: self.x.map(|o| o.scale(s)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        JordanElement {
            xi: [0, 1, 2].map(|i| self.xi[i] + other.xi[i]),
            x: [0, 1, 2].map(|i| self.x[i] + other.x[i]),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// `(X, Y) = tr(X∘Y)`, evaluated through the orthonormal coordinates.
    pub fn inner(&self, other: &Self) -> f64 {
        let mut s: f64 = self.xi.iter().zip(&other.xi).map(|(a, b)| a * b).sum();
        for (a, b) in self.x.iter().zip(&other.x) {
            s += 2.0 * a.dot(b);
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Components uniform on `[−1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let d = rand::distr::Uniform::new_inclusive(-1.0, 1.0).expect("valid range");
        JordanElement {
            xi: [rng.sample(d), rng.sample(d), rng.sample(d)],
            x: [Octonion::random(rng), Octonion::random(rng), Octonion::random(rng)],
        }
    }

    /// A random element with its trace removed.
    pub fn random_traceless<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut t = Self::random(rng);
        let m = t.trace() / 3.0;
        t.xi.iter_mut().for_each(|v| *v -= m);
        t
    }
}

/// Entry `(r, c)` of `AB + BA` for 3×3 octonion matrices.
fn sym_entry(a: &OMat, b: &OMat, r: usize, c: usize) -> Octonion {
    let mut acc = Octonion::ZERO;
    for k in 0..3 {
        acc = acc + a[r][k] * b[k][c] + b[r][k] * a[k][c];
    }
    acc
}

/// `X∘Y = ½(XY + YX)`
pub fn jordan_product(x: &JordanElement, y: &JordanElement) -> JordanElement {
    let a = x.to_matrix();
    let b = y.to_matrix();
    JordanElement {
        xi: [0, 1, 2].map(|i| 0.5 * sym_entry(&a, &b, i, i).re()),
        x: [
            sym_entry(&a, &b, 1, 2).scale(0.5),
            sym_entry(&a, &b, 2, 0).scale(0.5),
            sym_entry(&a, &b, 0, 1).scale(0.5),
        ],
    }
}

/// `X×Y = ½(2X∘Y − tr(X)Y − tr(Y)X + (tr(X)tr(Y) − tr(X∘Y))I)`
pub fn cross(x: &JordanElement, y: &JordanElement) -> JordanElement {
    let (tx, ty) = (x.trace(), y.trace());
    let xy = jordan_product(x, y);
    let s = tx * ty - xy.trace();
    xy.scale(2.0)
        .sub(&y.scale(tx))
        .sub(&x.scale(ty))
        .add(&JordanElement::identity().scale(s))
        .scale(0.5)
}

/// `det(X) = ⅓(X×X, X)`
pub fn det(x: &JordanElement) -> f64 {
    cross(x, x).inner(x) / 3.0
}

/// `X×Y` together with `det(X)`.
pub fn cross_and_det(x: &JordanElement, y: &JordanElement) -> (JordanElement, f64) {
    (cross(x, y), det(x))
}

/// Matrix of `L_T: X ↦ T∘X` in the orthonormal coordinates.
pub fn mult_operator(t: &JordanElement) -> Matrix<f64> {
    let cols: Vec<Vec<f64>> = (0..DIM)
        .map(|k| jordan_product(t, &JordanElement::coordinate_basis(k)).coords().to_vec())
        .collect();
    Matrix::from_columns(&cols).expect("square")
}

/// `exp(s·L_T)X` summed as a power series of Jordan products.
pub fn exp_action(t: &JordanElement, x: &JordanElement, s: f64) -> JordanElement {
    let mut term = *x;
    let mut sum = *x;
    let scale = x.norm().max(f64::MIN_POSITIVE);
    for k in 1..200 {
        term = jordan_product(t, &term).scale(s / k as f64);
        sum = sum.add(&term);
        if term.norm() <= 1e-18 * scale && k > 2 {
            break;
        }
    }
    sum
}

fn require_traceless(t: &JordanElement) -> Result<()> {
    if t.trace().abs() > 1e-12 * (1.0 + t.norm()) {
        return Err(Error::InvalidSpec(format!("expected a trace-zero element, trace is {}", t.trace())));
    }
    Ok(())
}

/// `|tr L_T|` for `T ∈ 𝔍₀`.
pub fn e6_trace_audit(t: &JordanElement) -> Result<f64> {
    require_traceless(t)?;
    Ok(mult_operator(t).trace()?.abs())
}

/// `d/ds det(exp(s·L_T)X)` at `s = 0` two ways, and the change of `det` along the flow to `s = 1`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DetInvariance {
    /// `(X×X, T∘X)`, the pairing of the gradient of `det` with the flow.
    pub gradient: f64,
    /// Richardson-extrapolated central difference in `s`.
    pub finite_difference: f64,
    /// `|det(exp(L_T)X) − det(X)|`
    pub flow: f64,
    pub det: f64,
}

impl DetInvariance {
    pub fn max(&self) -> f64 {
        self.gradient.abs().max(self.finite_difference.abs()).max(self.flow)
    }
}

pub fn det_invariance_audit(t: &JordanElement, x: &JordanElement) -> Result<DetInvariance> {
    require_traceless(t)?;
    let gradient = cross(x, x).inner(&jordan_product(t, x));
    let d = |s: f64| det(&exp_action(t, x, s));
    let central = |h: f64| (d(h) - d(-h)) / (2.0 * h);
    let h = 1e-3;
    let finite_difference = (4.0 * central(h / 2.0) - central(h)) / 3.0;
    let det0 = det(x);
    Ok(DetInvariance {
        gradient,
        finite_difference,
        flow: (d(1.0) - det0).abs(),
        det: det0,
    })
}

/// Orthonormal basis of `𝔍₀`: `diag(1,−1,0)/√2`, `diag(1,1,−2)/√6`, then
/// `e_k/√2` in slot `x₁`, `x₂`, `x₃` for `k = 0..8`.
pub fn traceless_basis() -> Vec<JordanElement> {
    let mut out = vec![
        JordanElement::diag(1.0, -1.0, 0.0).scale(std::f64::consts::FRAC_1_SQRT_2),
        JordanElement::diag(1.0, 1.0, -2.0).scale(1.0 / 6f64.sqrt()),
    ];
    for slot in 0..3 {
        for k in 0..8 {
            let mut e = JordanElement::zero();
            e.x[slot] = Octonion::basis(k).scale(std::f64::consts::FRAC_1_SQRT_2);
            out.push(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coordinates_roundtrip_and_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = JordanElement::random(&mut rng);
        let y = JordanElement::random(&mut rng);
        let back = JordanElement::from_coords(&x.coords()).unwrap();
        assert!(back.sub(&x).norm() < 1e-15);
        assert!((jordan_product(&x, &y).trace() - x.inner(&y)).abs() < 1e-12);
        let b = traceless_basis();
        assert_eq!(b.len(), 26);
        for (i, bi) in b.iter().enumerate() {
            assert!(bi.trace().abs() < 1e-15);
            for (j, bj) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((bi.inner(bj) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn identity_and_commutativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = JordanElement::random(&mut rng);
        let y = JordanElement::random(&mut rng);
        assert!(jordan_product(&JordanElement::identity(), &x).sub(&x).norm() < 1e-15);
        assert!(jordan_product(&x, &y).sub(&jordan_product(&y, &x)).norm() < 1e-14);
        assert!(x.inner(&x) > 0.0);
    }

    #[test]
    fn jordan_identity() {
        // (X∘Y)∘(X∘X) = X∘(Y∘(X∘X))
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let x = JordanElement::random(&mut rng);
            let y = JordanElement::random(&mut rng);
            let xx = jordan_product(&x, &x);
            let lhs = jordan_product(&jordan_product(&x, &y), &xx);
            let rhs = jordan_product(&x, &jordan_product(&y, &xx));
            assert!(lhs.sub(&rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn determinant_basics() {
        assert!((det(&JordanElement::identity()) - 1.0).abs() < 1e-15);
        assert!((det(&JordanElement::diag(2.0, -3.0, 0.5)) + 3.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = JordanElement::random(&mut rng);
        assert!((det(&x.scale(1.7)) - 1.7f64.powi(3) * det(&x)).abs() < 1e-12);
        assert_eq!(cross(&JordanElement::identity(), &JordanElement::identity()), JordanElement::identity());
    }

    #[test]
    fn determinant_of_complex_hermitian_matches_direct_formula() {
        // With entries in span(1, e₁) the algebra is 3×3 complex Hermitian matrices.
        let (a, b, c) = (0.7, -1.2, 2.0);
        let z = |re: f64, im: f64| {
            let mut o = Octonion::ZERO;
            o.0[0] = re;
            o.0[1] = im;
            o
        };
        let (x1, x2, x3) = (z(0.3, -0.4), z(-0.5, 0.2), z(1.1, 0.6));
        let x = JordanElement { xi: [a, b, c], x: [x1, x2, x3] };
        // det = abc + 2Re(x₃x₁x₂) − a|x₁|² − b|x₂|² − c|x₃|²
        let want = a * b * c + 2.0 * (x3 * x1 * x2).re() - a * x1.norm_sq() - b * x2.norm_sq() - c * x3.norm_sq();
        assert!((det(&x) - want).abs() < 1e-13, "{} vs {want}", det(&x));
    }

    #[test]
    fn multiplication_operator() {
        let id = mult_operator(&JordanElement::identity());
        for r in 0..DIM {
            for c in 0..DIM {
                assert_eq!(id[(r, c)], if r == c { 1.0 } else { 0.0 });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = JordanElement::random(&mut rng);
        let l = mult_operator(&t);
        let image = l.mat_vec(&JordanElement::identity().coords()).unwrap();
        let want = t.coords();
        for (a, b) in image.iter().zip(&want) {
            assert!((a - b).abs() < 1e-15);
        }
        for r in 0..DIM {
            for c in 0..DIM {
                assert!((l[(r, c)] - l[(c, r)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exp_action_matches_matrix_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = JordanElement::random_traceless(&mut rng);
        let x = JordanElement::random(&mut rng);
        let series = exp_action(&t, &x, 0.8).coords();
        let dense = mult_operator(&t).scale(0.8).exp().unwrap().mat_vec(&x.coords()).unwrap();
        for (a, b) in series.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn traceless_requirement() {
        assert!(e6_trace_audit(&JordanElement::identity()).is_err());
        assert!(e6_trace_audit(&JordanElement::diag(1.0, 0.0, -1.0)).unwrap() < 1e-12);
        let z = JordanElement::zero();
        let audit = det_invariance_audit(&z, &JordanElement::diag(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(audit.max(), 0.0);
    }
}
