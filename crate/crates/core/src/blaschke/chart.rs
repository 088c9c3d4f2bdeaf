use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::RealScalar;

/// A hypersurface chart `x: U ⊂ Rⁿ → Rⁿ⁺¹`.
///
/// `eval` is required; `eval_jet` is optional and lets the pipeline use exact
/// Taylor arithmetic instead of finite differences.
pub trait Chart: Send + Sync {
    fn label(&self) -> String;

    /// Intrinsic dimension `n`.
    fn dim(&self) -> usize;

    fn ambient_dim(&self) -> usize {
        self.dim() + 1
    }

    /// A box on which the chart is smooth and nondegenerate.
    fn domain(&self) -> Vec<(f64, f64)>;

    fn eval(&self, u: &[f64]) -> Result<Vec<f64>>;

    fn eval_jet(&self, _u: &[Jet<f64>]) -> Result<Vec<Jet<f64>>> {
        Err(Error::UnsupportedBackend(self.label()))
    }

    fn jet_capable(&self) -> bool {
        false
    }
}

/// A chart written once against [`RealScalar`], which gives it both backends.
pub trait SmoothMap: Send + Sync {
    fn label(&self) -> String;
    fn dim(&self) -> usize;
    fn domain(&self) -> Vec<(f64, f64)>;
    fn map<S: RealScalar>(&self, u: &[S]) -> Result<Vec<S>>;
}

impl<T: SmoothMap> Chart for T {
    fn label(&self) -> String {
        SmoothMap::label(self)
    }
    fn dim(&self) -> usize {
        SmoothMap::dim(self)
    }
    fn domain(&self) -> Vec<(f64, f64)> {
        SmoothMap::domain(self)
    }
    fn eval(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), u.len())?;
        self.map(u)
    }
    fn eval_jet(&self, u: &[Jet<f64>]) -> Result<Vec<Jet<f64>>> {
        check_len(self.dim(), u.len())?;
        self.map(u)
    }
    fn jet_capable(&self) -> bool {
        true
    }
}

fn check_len(n: usize, got: usize) -> Result<()> {
    if n != got {
        return Err(Error::ShapeMismatch(format!("chart of dimension {n} evaluated at a point of dimension {got}")));
    }
    Ok(())
}

fn lin_comb<S: RealScalar>(row: &[f64], v: &[S], shift: f64) -> S {
    let mut acc = v[0].from_f64_like(shift);
    for (m, x) in row.iter().zip(v) {
        if *m != 0.0 {
            acc = acc.add_ref(&x.scale(*m));
        }
    }
    acc
}

/// `x ↦ M·x + b` applied to the ambient values of a chart.
pub struct AffineImage {
    inner: Arc<dyn Chart>,
    matrix: Vec<Vec<f64>>,
    shift: Vec<f64>,
}

impl AffineImage {
    pub fn new(inner: Arc<dyn Chart>, matrix: Vec<Vec<f64>>, shift: Vec<f64>) -> Result<Self> {
        let m = inner.ambient_dim();
        if matrix.len() != m || matrix.iter().any(|r| r.len() != m) || shift.len() != m {
            return Err(Error::ShapeMismatch(format!("ambient map must be {m}x{m}")));
        }
        Ok(AffineImage { inner, matrix, shift })
    }

    /// Homothety `x ↦ λx`.
    pub fn scaling(inner: Arc<dyn Chart>, lambda: f64) -> Self {
        let m = inner.ambient_dim();
        let matrix = (0..m)
            .map(|r| (0..m).map(|c| if r == c { lambda } else { 0.0 }).collect())
            .collect();
        AffineImage {
            inner,
            matrix,
            shift: vec![0.0; m],
        }
    }

    fn apply<S: RealScalar>(&self, x: Vec<S>) -> Vec<S> {
        self.matrix
            .iter()
            .zip(&self.shift)
            .map(|(row, &b)| lin_comb(row, &x, b))
            .collect()
    }
}

impl Chart for AffineImage {
    fn label(&self) -> String {
        format!("affine({})", self.inner.label())
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn domain(&self) -> Vec<(f64, f64)> {
        self.inner.domain()
    }
    fn eval(&self, u: &[f64]) -> Result<Vec<f64>> {
        Ok(self.apply(self.inner.eval(u)?))
    }
    fn eval_jet(&self, u: &[Jet<f64>]) -> Result<Vec<Jet<f64>>> {
        Ok(self.apply(self.inner.eval_jet(u)?))
    }
    fn jet_capable(&self) -> bool {
        self.inner.jet_capable()
    }
}

/// Chart precomposed with `v ↦ u = P·v + c`.
pub struct LinearReparam {
    inner: Arc<dyn Chart>,
    matrix: Vec<Vec<f64>>,
    shift: Vec<f64>,
}

impl LinearReparam {
    pub fn new(inner: Arc<dyn Chart>, matrix: Vec<Vec<f64>>, shift: Vec<f64>) -> Result<Self> {
        let n = inner.dim();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) || shift.len() != n {
            return Err(Error::ShapeMismatch(format!("parameter map must be {n}x{n}")));
        }
        Ok(LinearReparam { inner, matrix, shift })
    }

    /// Parameters `u` of the inner chart at the new parameters `v`.
    pub fn forward(&self, v: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .zip(&self.shift)
            .map(|(row, &b)| lin_comb(row, v, b))
            .collect()
    }

    fn forward_generic<S: RealScalar>(&self, v: &[S]) -> Vec<S> {
        self.matrix
            .iter()
            .zip(&self.shift)
            .map(|(row, &b)| lin_comb(row, v, b))
            .collect()
    }
}

impl Chart for LinearReparam {
    fn label(&self) -> String {
        format!("reparam({})", self.inner.label())
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn domain(&self) -> Vec<(f64, f64)> {
        // only meaningful near the preimage of the inner domain center
        self.inner.domain()
    }
    fn eval(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        self.inner.eval(&self.forward(v))
    }
    fn eval_jet(&self, v: &[Jet<f64>]) -> Result<Vec<Jet<f64>>> {
        check_len(self.dim(), v.len())?;
        self.inner.eval_jet(&self.forward_generic(v))
    }
    fn jet_capable(&self) -> bool {
        self.inner.jet_capable()
    }
}

/// Chart precomposed with the unit-triangular diffeomorphism
/// `u₀ = v₀`, `uᵢ = vᵢ + ε·vᵢ₋₁²`.
pub struct ShearReparam {
    inner: Arc<dyn Chart>,
    eps: f64,
}

impl ShearReparam {
    pub fn new(inner: Arc<dyn Chart>, eps: f64) -> Self {
        ShearReparam { inner, eps }
    }

    pub fn forward(&self, v: &[f64]) -> Vec<f64> {
        self.forward_generic(v)
    }

    /// Preimage of `u` by forward substitution.
    pub fn inverse(&self, u: &[f64]) -> Vec<f64> {
        let mut v = u.to_vec();
        for i in 1..v.len() {
            v[i] = u[i] - self.eps * v[i - 1] * v[i - 1];
        }
        v
    }

    fn forward_generic<S: RealScalar>(&self, v: &[S]) -> Vec<S> {
        let mut u = v.to_vec();
        for i in 1..v.len() {
            let sq = v[i - 1].mul_ref(&v[i - 1]);
            u[i] = v[i].add_ref(&sq.scale(self.eps));
        }
        u
    }
}

impl Chart for ShearReparam {
    fn label(&self) -> String {
        format!("shear({})", self.inner.label())
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn domain(&self) -> Vec<(f64, f64)> {
        self.inner.domain()
    }
    fn eval(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        self.inner.eval(&self.forward(v))
    }
    fn eval_jet(&self, v: &[Jet<f64>]) -> Result<Vec<Jet<f64>>> {
        check_len(self.dim(), v.len())?;
        self.inner.eval_jet(&self.forward_generic(v))
    }
    fn jet_capable(&self) -> bool {
        self.inner.jet_capable()
    }
}

/// A chart given by a closure on `f64` only (finite differences).
pub struct FnChart<F> {
    label: String,
    dim: usize,
    domain: Vec<(f64, f64)>,
    f: F,
}

impl<F> FnChart<F>
where
    F: Fn(&[f64]) -> Vec<f64> + Send + Sync,
{
    pub fn new(label: impl Into<String>, dim: usize, domain: Vec<(f64, f64)>, f: F) -> Self {
        FnChart {
            label: label.into(),
            dim,
            domain,
            f,
        }
    }
}

impl<F> Chart for FnChart<F>
where
    F: Fn(&[f64]) -> Vec<f64> + Send + Sync,
{
    fn label(&self) -> String {
        self.label.clone()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn domain(&self) -> Vec<(f64, f64)> {
        self.domain.clone()
    }
    fn eval(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim, u.len())?;
        Ok((self.f)(u))
    }
}
