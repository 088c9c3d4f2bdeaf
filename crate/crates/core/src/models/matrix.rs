use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blaschke::{compute_invariants, hypersphere_gauss_residual, Chart, SmoothMap};
use crate::error::{Error, Result};
use crate::jet::DerivBackend;
use crate::linalg::Matrix;
use crate::scalar::{RealScalar, Scalar};

type CMat = Matrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `SL(m,R)/SO(m)` in real symmetric matrices.
    Slr,
    /// `SL(m,C)/SU(m)` in complex Hermitian matrices.
    Slc,
    /// `SU*(2m)/Sp(m)` in quaternion Hermitian matrices, as `2m×2m` complex matrices.
    SuStar,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Slr => "slr",
            Family::Slc => "slc",
            Family::SuStar => "suh",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One of the three matrix symmetric hyperspheres with a target affine mean curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixModel {
    pub family: Family,
    pub m: usize,
    pub l1: f64,
}

/// Metric and cubic form at the origin in the tangent basis.
#[derive(Debug, Clone)]
pub struct OriginData {
    pub basis: Vec<CMat>,
    pub g_o: Array2<f64>,
    pub a_o: Array3<f64>,
}

/// Pipeline output at the origin compared against [`OriginData`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OriginCrosscheck {
    pub metric: f64,
    pub cubic: f64,
    pub gauss: f64,
    pub l1: f64,
}

fn unit(p: usize, r: usize, c: usize, z: Complex64) -> CMat {
    Matrix::from_fn(p, p, |i, j| if i == r && j == c { z } else { ZERO })
}

fn add(a: &CMat, b: &CMat) -> CMat {
    a.try_add(b).expect("same size")
}

fn sub(a: &CMat, b: &CMat) -> CMat {
    a.try_sub(b).expect("same size")
}

fn scale(a: &CMat, z: Complex64) -> CMat {
    a.map(|v| v * z)
}

/// `Re tr(XY)`
pub fn inner(x: &CMat, y: &CMat) -> f64 {
    let p = x.rows();
    let mut s = 0.0;
    for r in 0..p {
        for c in 0..p {
            s += (x[(r, c)] * y[(c, r)]).re;
        }
    }
    s
}

#[cfg(test)]
fn trace(x: &CMat) -> Complex64 {
    (0..x.rows()).map(|i| x[(i, i)]).sum()
}

/// `[[A, B], [−B̄, Ā]]`
fn quaternionic(a: &CMat, b: &CMat) -> CMat {
    let m = a.rows();
    Matrix::from_fn(2 * m, 2 * m, |r, c| match (r < m, c < m) {
        (true, true) => a[(r, c)],
        (true, false) => b[(r, c - m)],
        (false, true) => -b[(r - m, c)].conj(),
        (false, false) => a[(r - m, c - m)].conj(),
    })
}

/// Orthonormalizes a spanning set with respect to `Re tr(XY)`, dropping dependent elements.
fn orthonormalize(span: Vec<CMat>) -> Vec<CMat> {
    let mut out: Vec<CMat> = Vec::new();
    for mut v in span {
        for _ in 0..2 {
            for e in &out {
                v = sub(&v, &e.scale(inner(e, &v)));
            }
        }
        let norm = inner(&v, &v).sqrt();
        if norm > 1e-10 {
            out.push(v.scale(1.0 / norm));
        }
    }
    out
}

impl MatrixModel {
    pub fn new(family: Family, m: usize, l1: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidSpec(format!("matrix models need m ≥ 3, got {m}")));
        }
        if !(l1 < 0.0) || !l1.is_finite() {
            return Err(Error::InvalidSpec(format!("affine mean curvature must be negative, got {l1}")));
        }
        Ok(MatrixModel { family, m, l1 })
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.family, self.m)
    }

    /// Intrinsic dimension.
    pub fn n(&self) -> usize {
        let m = self.m;
        match self.family {
            Family::Slr => m * (m + 1) / 2 - 1,
            Family::Slc => m * m - 1,
            Family::SuStar => 2 * m * m - m - 1,
        }
    }

    /// Size of the complex matrices representing the model.
    pub fn matrix_size(&self) -> usize {
        match self.family {
            Family::SuStar => 2 * self.m,
            _ => self.m,
        }
    }

    /// `−4/(d·L₁)` with `d = tr I`: the factor in `g_o = γ·(X, Y)`.
    pub fn metric_factor(&self) -> f64 {
        -4.0 / (self.matrix_size() as f64 * self.l1)
    }

    /// `2/d`: the trace correction in `A_o(X, Y) = XY + YX − (2/d)tr(XY)I`.
    fn cubic_trace_factor(&self) -> f64 {
        2.0 / self.matrix_size() as f64
    }

    /// The constant `C` exactly as printed for the model.
    pub fn printed_constant(&self) -> f64 {
        let n = self.n() as f64;
        let m = self.m as f64;
        match self.family {
            Family::Slr | Family::Slc => m.sqrt() / 4.0 * (4.0 / (m * -self.l1)).powf((n + 2.0) / 2.0),
            Family::SuStar => (2.0 * m).sqrt() / 4.0 * (2.0 / (m * -self.l1)).powf((n + 2.0) / 2.0),
        }
    }

    /// Scale `κ` of the chart `κ·exp(2U)` realizing the target `L₁`:
    /// `2ⁿκⁿ⁺¹ = C`, the determinant of the frame `(x₁, …, xₙ, x)` at the
    /// origin per unit volume of the tangent basis.
    pub fn chart_scale(&self) -> f64 {
        let n = self.n() as i32;
        (self.printed_constant() / 2f64.powi(n)).powf(1.0 / (n as f64 + 1.0))
    }

    /// `|(4C/√d)^{2/(n+2)} − γ|`: the two printed forms of `g_o` must agree.
    pub fn constant_audit(&self) -> f64 {
        let n = self.n() as f64;
        let d = self.matrix_size() as f64;
        let lhs = (4.0 * self.printed_constant() / d.sqrt()).powf(2.0 / (n + 2.0));
        (lhs - self.metric_factor()).abs()
    }

    /// Tangent basis at the origin in the standard layout (`f_α`, `f^j_i`, `f̃^j_i`, …).
    pub fn tangent_basis(&self) -> Vec<CMat> {
        let m = self.m;
        let mut hermitian0 = Vec::new();
        for a in 0..m - 1 {
            hermitian0.push(sub(&unit(m, a, a, ONE), &unit(m, m - 1, m - 1, ONE)));
        }
        for i in 0..m {
            for j in i + 1..m {
                hermitian0.push(scale(&add(&unit(m, i, j, ONE), &unit(m, j, i, ONE)), ONE * 0.5));
            }
        }
        if self.family != Family::Slr {
            for i in 0..m {
                for j in i + 1..m {
                    hermitian0.push(scale(&sub(&unit(m, i, j, ONE), &unit(m, j, i, ONE)), I * 0.5));
                }
            }
        }
        if self.family != Family::SuStar {
            return hermitian0;
        }
        let zero = Matrix::from_fn(m, m, |_, _| ZERO);
        let mut out: Vec<CMat> = hermitian0.iter().map(|a| quaternionic(a, &zero)).collect();
        for z in [ONE * 0.5, I * 0.5] {
            for i in 0..m {
                for j in i + 1..m {
                    let b = scale(&sub(&unit(m, i, j, ONE), &unit(m, j, i, ONE)), z);
                    out.push(quaternionic(&zero, &b));
                }
            }
        }
        out
    }

    /// Orthonormal basis of the ambient space; coordinates are `Re tr(E_a·M)`.
    pub fn ambient_basis(&self) -> Vec<CMat> {
        let m = self.m;
        let mut span = Vec::new();
        let mut herm = Vec::new();
        for i in 0..m {
            herm.push(unit(m, i, i, ONE));
            for j in i + 1..m {
                herm.push(add(&unit(m, i, j, ONE), &unit(m, j, i, ONE)));
                if self.family != Family::Slr {
                    herm.push(sub(&unit(m, i, j, I), &unit(m, j, i, I)));
                }
            }
        }
        match self.family {
            Family::Slr | Family::Slc => span.extend(herm),
            Family::SuStar => {
                let zero = Matrix::from_fn(m, m, |_, _| ZERO);
                span.extend(herm.iter().map(|a| quaternionic(a, &zero)));
                for z in [ONE, I] {
                    for i in 0..m {
                        for j in i + 1..m {
                            let b = sub(&unit(m, i, j, z), &unit(m, j, i, z));
                            span.push(quaternionic(&zero, &b));
                        }
                    }
                }
            }
        }
        orthonormalize(span)
    }

    /// Ambient coordinates of a matrix.
    pub fn coordinates(&self, mat: &CMat) -> Vec<f64> {
        self.ambient_basis().iter().map(|e| inner(e, mat)).collect()
    }

    /// Chart `u ↦ κ·exp(2Σuᵏ X_k)` with the scale realizing the target `L₁`.
    pub fn chart(&self) -> MatrixChart {
        self.chart_with_scale(self.chart_scale())
    }

    /// Same chart with an arbitrary scale.
    pub fn chart_with_scale(&self, kappa: f64) -> MatrixChart {
        MatrixChart {
            model: self.clone(),
            kappa,
            tangent: self.tangent_basis(),
            ambient: self.ambient_basis(),
        }
    }

    pub fn origin_data(&self) -> OriginData {
        let basis = self.tangent_basis();
        let n = basis.len();
        let gamma = self.metric_factor();
        let mu = self.cubic_trace_factor();
        let p = self.matrix_size();
        let g_o = Array2::from_shape_fn((n, n), |(i, j)| gamma * inner(&basis[i], &basis[j]));
        let a_o = Array3::from_shape_fn((n, n, n), |(i, j, k)| {
            let prod = add(&basis[i].matmul(&basis[j]), &basis[j].matmul(&basis[i]));
            let corr = mu * inner(&basis[i], &basis[j]);
            let id = Matrix::identity_like(p, &ONE).scale(corr);
            gamma * inner(&sub(&prod, &id), &basis[k])
        });
        OriginData { basis, g_o, a_o }
    }

    /// `max_X |tr(Y ↦ XY + YX − (2/d)tr(XY)I)|` over the tangent basis, as
    /// operators on the tangent space.
    pub fn traceless_audit(&self) -> f64 {
        let basis = self.tangent_basis();
        let n = basis.len();
        let mu = self.cubic_trace_factor();
        let p = self.matrix_size();
        let gram = Matrix::from_fn(n, n, |i, j| inner(&basis[i], &basis[j]));
        let gram_inv = match gram.inverse() {
            Ok(g) => g,
            Err(_) => return f64::INFINITY,
        };
        let mut worst = 0.0f64;
        for x in &basis {
            // projections of op(X_l) onto the basis, then coordinates by G⁻¹
            let proj = Matrix::from_fn(n, n, |k, l| {
                let y = &basis[l];
                let op = sub(
                    &add(&x.matmul(y), &y.matmul(x)),
                    &Matrix::identity_like(p, &ONE).scale(mu * inner(x, y)),
                );
                inner(&basis[k], &op)
            });
            let t = gram_inv.matmul(&proj).trace().unwrap_or(f64::NAN);
            worst = worst.max(t.abs());
        }
        worst
    }

    /// Spanning set of the full Lie algebra acting by `M ↦ XM + MX̄ᵗ`.
    fn lie_algebra_span(&self) -> Vec<CMat> {
        let m = self.m;
        let mut gl = Vec::new();
        let scalars: &[Complex64] = match self.family {
            Family::Slr => &[ONE],
            _ => &[ONE, I],
        };
        for &z in scalars {
            for i in 0..m {
                for j in 0..m {
                    if i != j {
                        gl.push(unit(m, i, j, z));
                    }
                }
            }
            for a in 0..m - 1 {
                gl.push(sub(&unit(m, a, a, z), &unit(m, m - 1, m - 1, z)));
            }
        }
        match self.family {
            Family::Slr | Family::Slc => gl,
            Family::SuStar => {
                let zero = Matrix::from_fn(m, m, |_, _| ZERO);
                let mut out: Vec<CMat> = gl.iter().map(|a| quaternionic(a, &zero)).collect();
                // the imaginary scalar part of A is allowed: tr = 2 Re tr A
                out.push(quaternionic(&scale(&Matrix::identity_like(m, &ONE), I), &zero));
                for z in [ONE, I] {
                    for i in 0..m {
                        for j in 0..m {
                            out.push(quaternionic(&zero, &unit(m, i, j, z)));
                        }
                    }
                }
                out
            }
        }
    }

    /// Trace of `φ_*(X): M ↦ XM + MX̄ᵗ` on the ambient space.
    pub fn operator_trace(&self, x: &CMat) -> f64 {
        let ambient = self.ambient_basis();
        let xh = x.conj_transpose();
        ambient
            .iter()
            .map(|e| inner(e, &add(&x.matmul(e), &e.matmul(&xh))))
            .sum()
    }

    /// Max `|tr φ_*(X)|` over a spanning set of the Lie algebra and `samples`
    /// random elements.
    pub fn unimodularity_audit(&self, samples: usize, seed: u64) -> f64 {
        let span = self.lie_algebra_span();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = span.iter().map(|x| self.operator_trace(x).abs()).fold(0.0, f64::max);
        for _ in 0..samples {
            let mut x = Matrix::from_fn(self.matrix_size(), self.matrix_size(), |_, _| ZERO);
            for s in &span {
                x = add(&x, &s.scale(rng.random_range(-1.0..1.0)));
            }
            worst = worst.max(self.operator_trace(&x).abs());
        }
        worst
    }

    /// Compares the pipeline at `u = 0` with [`OriginData`] and evaluates the
    /// hypersphere Gauss equation there.
    pub fn origin_crosscheck(&self, backend: &DerivBackend) -> Result<OriginCrosscheck> {
        let chart = self.chart();
        let inv = compute_invariants(&chart, &vec![0.0; self.n()], backend)?;
        let od = self.origin_data();
        let metric = (&inv.g - &od.g_o).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cubic = (&inv.a_low - &od.a_o).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(OriginCrosscheck {
            metric,
            cubic,
            gauss: hypersphere_gauss_residual(&inv),
            l1: inv.l1,
        })
    }

    pub fn into_chart(self) -> Arc<dyn Chart> {
        Arc::new(self.chart())
    }
}

/// `u ↦ κ·exp(2U)`, `U = Σuᵏ X_k`, in orthonormal ambient coordinates.
#[derive(Debug, Clone)]
pub struct MatrixChart {
    model: MatrixModel,
    kappa: f64,
    tangent: Vec<CMat>,
    ambient: Vec<CMat>,
}

impl MatrixChart {
    pub fn model(&self) -> &MatrixModel {
        &self.model
    }

    pub fn scale(&self) -> f64 {
        self.kappa
    }

    /// The matrix `κ·exp(2U)` itself.
    pub fn matrix_at(&self, u: &[f64]) -> Result<CMat> {
        let p = self.model.matrix_size();
        let mut x = Matrix::from_fn(p, p, |_, _| ZERO);
        for (uk, b) in u.iter().zip(&self.tangent) {
            x = add(&x, &b.scale(2.0 * uk));
        }
        Ok(x.exp()?.scale(self.kappa))
    }
}

impl SmoothMap for MatrixChart {
    fn label(&self) -> String {
        self.model.label()
    }

    fn dim(&self) -> usize {
        self.model.n()
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        vec![(-0.3, 0.3); self.model.n()]
    }

    fn map<S: RealScalar>(&self, u: &[S]) -> Result<Vec<S>> {
        let p = self.model.matrix_size();
        let czero = u[0].complexify().zero_like();
        let mut x = Matrix::from_fn(p, p, |_, _| czero.clone());
        for (uk, b) in u.iter().zip(&self.tangent) {
            for r in 0..p {
                for c in 0..p {
                    let z = b[(r, c)];
                    if z != ZERO {
                        x[(r, c)] = x[(r, c)].add_ref(&uk.complex_scale(z * 2.0));
                    }
                }
            }
        }
        let e = x.exp()?;
        let re: Vec<S> = e.data().iter().map(S::real_part).collect();
        let im: Vec<S> = e.data().iter().map(S::imag_part).collect();
        let zero = u[0].zero_like();
        Ok(self
            .ambient
            .iter()
            .map(|b| {
                // Re tr(E·M) = Σ Re(E_cr)Re(M_rc) − Im(E_cr)Im(M_rc)
                let mut acc = zero.clone();
                for r in 0..p {
                    for c in 0..p {
                        let w = b[(c, r)];
                        if w.re != 0.0 {
                            acc = acc.add_ref(&re[r * p + c].scale(w.re * self.kappa));
                        }
                        if w.im != 0.0 {
                            acc = acc.sub_ref(&im[r * p + c].scale(w.im * self.kappa));
                        }
                    }
                }
                acc
            })
            .collect())
    }
}
