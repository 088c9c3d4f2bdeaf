use crate::blaschke::SmoothMap;
use crate::error::{Error, Result};
use crate::scalar::RealScalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadricKind {
    /// `|x|² = c²`
    Ellipsoid(f64),
    /// `|x'|² = 2xⁿ⁺¹`
    Paraboloid,
    /// `|x'|² − (xⁿ⁺¹)² = −c²`, `xⁿ⁺¹ > 0`
    Hyperboloid(f64),
}

/// Graph chart of a quadric over the first `n` coordinates.
#[derive(Debug, Clone)]
pub struct QuadricChart {
    kind: QuadricKind,
    n: usize,
}

pub fn quadric_chart(kind: QuadricKind, n: usize) -> Result<QuadricChart> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("quadric of dimension {n}")));
    }
    match kind {
        QuadricKind::Ellipsoid(c) | QuadricKind::Hyperboloid(c) if !(c > 0.0) => {
            Err(Error::InvalidSpec(format!("quadric radius must be positive, got {c}")))
        }
        _ => Ok(QuadricChart { kind, n }),
    }
}

impl QuadricChart {
    pub fn kind(&self) -> QuadricKind {
        self.kind
    }
}

fn norm_sq<S: RealScalar>(u: &[S]) -> S {
    let mut acc = u[0].zero_like();
    for v in u {
        acc.mul_add_assign(v, v);
    }
    acc
}

impl SmoothMap for QuadricChart {
    fn label(&self) -> String {
        let kind = match self.kind {
            QuadricKind::Ellipsoid(_) => "ellipsoid",
            QuadricKind::Paraboloid => "paraboloid",
            QuadricKind::Hyperboloid(_) => "hyperboloid",
        };
        format!("quadric:{kind}:{}", self.n)
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        let r = match self.kind {
            // stay well inside the equator
            QuadricKind::Ellipsoid(c) => 0.5 * c / (self.n as f64).sqrt(),
            _ => 1.0,
        };
        vec![(-r, r); self.n]
    }

    fn map<S: RealScalar>(&self, u: &[S]) -> Result<Vec<S>> {
        let r2 = norm_sq(u);
        let last = match self.kind {
            QuadricKind::Ellipsoid(c) => r2.scale(-1.0).add_ref(&r2.from_f64_like(c * c)).sqrt(),
            QuadricKind::Paraboloid => r2.scale(0.5),
            QuadricKind::Hyperboloid(c) => r2.add_ref(&r2.from_f64_like(c * c)).sqrt(),
        };
        if !last.value().is_finite() {
            return Err(Error::NonFinite);
        }
        let mut x = u.to_vec();
        x.push(last);
        Ok(x)
    }
}

/// `x¹⋯xⁿ⁺¹ = C` parametrized by `t ↦ (e^{t₁}, …, e^{tₙ}, C·e^{−Σt})`.
#[derive(Debug, Clone)]
pub struct FlatChart {
    n: usize,
    c: f64,
}

pub fn flat_chart(n: usize, c: f64) -> Result<FlatChart> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("flat hypersphere of dimension {n}")));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidSpec(format!("flat hypersphere constant must be positive, got {c}")));
    }
    Ok(FlatChart { n, c })
}

impl FlatChart {
    pub fn constant(&self) -> f64 {
        self.c
    }
}

impl SmoothMap for FlatChart {
    fn label(&self) -> String {
        format!("flat:{}", self.n)
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        vec![(-1.0, 1.0); self.n]
    }

    fn map<S: RealScalar>(&self, t: &[S]) -> Result<Vec<S>> {
        let mut sum = t[0].zero_like();
        let mut x: Vec<S> = Vec::with_capacity(self.n + 1);
        for ti in t {
            sum = sum.add_ref(ti);
            x.push(ti.exp());
        }
        x.push(sum.scale(-1.0).exp().scale(self.c));
        Ok(x)
    }
}

/// The paraboloid with a cubic graph term, `(u, ½|u|² + ε·u₁³)`; not an
/// affine sphere, used as a negative control.
#[derive(Debug, Clone)]
pub struct PerturbedParaboloid {
    n: usize,
    eps: f64,
}

pub fn perturbed_paraboloid(n: usize, eps: f64) -> Result<PerturbedParaboloid> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("perturbed paraboloid of dimension {n}")));
    }
    Ok(PerturbedParaboloid { n, eps })
}

impl SmoothMap for PerturbedParaboloid {
    fn label(&self) -> String {
        format!("perturbed:{}", self.n)
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        // h = I + 6ε u₁ e₁e₁ᵀ stays positive definite here
        let r = if self.eps == 0.0 { 1.0 } else { (0.5 / (6.0 * self.eps.abs())).min(1.0) };
        vec![(-r, r); self.n]
    }

    fn map<S: RealScalar>(&self, u: &[S]) -> Result<Vec<S>> {
        let cube = u[0].mul_ref(&u[0]).mul_ref(&u[0]);
        let last = norm_sq(u).scale(0.5).add_ref(&cube.scale(self.eps));
        let mut x = u.to_vec();
        x.push(last);
        Ok(x)
    }
}
