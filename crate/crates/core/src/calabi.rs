//! Calabi composition of `r` points and `s` hyperbolic affine hyperspheres.
//!
//! With `K = r + s` factors, weights `e_a(t)` on `R^{K−1}` and constants
//! `c_a > 0`, the composition is
//! `x(t, p₁, …, p_s) = (c₁e₁, …, c_r e_r, c_{r+1}e_{r+1}x₁(p₁), …, c_K e_K x_s(p_s))`.

use std::sync::Arc;

use serde::Serialize;

use crate::blaschke::{compute_invariants, Chart};
use crate::error::{Error, Result};
use crate::jet::{DerivBackend, Jet};
use crate::scalar::RealScalar;

/// A positive-dimensional factor: a hyperbolic affine hypersphere centered at the origin.
#[derive(Clone)]
pub struct FactorSpec {
    pub chart: Arc<dyn Chart>,
    /// Its affine mean curvature (negative).
    pub l1: f64,
}

impl std::fmt::Debug for FactorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorSpec")
            .field("chart", &self.chart.label())
            .field("l1", &self.l1)
            .finish()
    }
}

/// Result of checking a factor through the pipeline.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FactorCheck {
    pub l1: f64,
    pub l1_error: f64,
    pub hypersphere: f64,
    /// `max |ξ + L₁x|`
    pub center: f64,
}

impl FactorSpec {
    pub fn new(chart: Arc<dyn Chart>, l1: f64) -> Result<Self> {
        if !(l1 < 0.0) {
            return Err(Error::InvalidSpec(format!(
                "factor `{}` must be hyperbolic, got L1 = {l1}",
                chart.label()
            )));
        }
        Ok(FactorSpec { chart, l1 })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Runs the pipeline at the domain center and at one more interior point.
    pub fn check(&self, backend: &DerivBackend) -> Result<FactorCheck> {
        let domain = self.chart.domain();
        let center: Vec<f64> = domain.iter().map(|(a, b)| 0.5 * (a + b)).collect();
        let off: Vec<f64> = domain
            .iter()
            .enumerate()
            .map(|(i, (a, b))| 0.5 * (a + b) + 0.2 * (b - a) * if i % 2 == 0 { 0.5 } else { -0.3 })
            .collect();
        let mut out = FactorCheck {
            l1: f64::NAN,
            l1_error: 0.0,
            hypersphere: 0.0,
            center: 0.0,
        };
        for u in [center, off] {
            let inv = compute_invariants(self.chart.as_ref(), &u, backend)?;
            let res = crate::blaschke::residual_report(&inv);
            out.l1 = inv.l1;
            out.l1_error = out.l1_error.max((inv.l1 - self.l1).abs());
            out.hypersphere = out.hypersphere.max(res.hypersphere);
            let c = (&inv.xi + &(&inv.x * inv.l1)).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            out.center = out.center.max(c);
        }
        Ok(out)
    }

    /// Fails unless the factor is a centered hypersphere with the stated `L₁`.
    pub fn validate(&self, backend: &DerivBackend, tol: f64) -> Result<FactorCheck> {
        let chk = self.check(backend)?;
        let scale = self.l1.abs().max(1.0);
        if chk.l1_error > tol * scale || chk.hypersphere > tol * scale || chk.center > tol * scale {
            return Err(Error::InvalidSpec(format!(
                "factor `{}` is not a centered hypersphere with L1 = {} (L1 error {:e}, hypersphere {:e}, center {:e})",
                self.chart.label(),
                self.l1,
                chk.l1_error,
                chk.hypersphere,
                chk.center
            )));
        }
        Ok(chk)
    }
}

#[derive(Debug, Clone)]
pub struct CalabiSpec {
    pub r: usize,
    pub factors: Vec<FactorSpec>,
    /// `c₁, …, c_K`; point factors first.
    pub c: Vec<f64>,
}

impl CalabiSpec {
    pub fn new(r: usize, factors: Vec<FactorSpec>, c: Vec<f64>) -> Result<Self> {
        let k = r + factors.len();
        if k < 2 {
            return Err(Error::InvalidSpec(format!("need at least two factors, got {k}")));
        }
        if c.len() != k {
            return Err(Error::InvalidSpec(format!("expected {k} constants c_a, got {}", c.len())));
        }
        if let Some(bad) = c.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidSpec(format!("constants c_a must be positive, got {bad}")));
        }
        Ok(CalabiSpec { r, factors, c })
    }

    pub fn s(&self) -> usize {
        self.factors.len()
    }

    pub fn k(&self) -> usize {
        self.r + self.s()
    }

    /// Factor dimensions `n_a`, zero for points.
    pub fn factor_dims(&self) -> Vec<usize> {
        let mut d = vec![0; self.r];
        d.extend(self.factors.iter().map(FactorSpec::dim));
        d
    }

    /// `n = Σ n_α + K − 1`
    pub fn dim(&self) -> usize {
        self.factor_dims().iter().sum::<usize>() + self.k() - 1
    }

    /// `f_a = a` for points and `Σ_{β≤α} n_β + ã` for the factor at `ã = α + r`;
    /// equivalently `Σ_{b≤a}(n_b + 1)`.
    pub fn f_indices(&self) -> Vec<f64> {
        let r = self.r;
        let mut out: Vec<f64> = (1..=r).map(|a| a as f64).collect();
        let mut cum = 0;
        for (alpha, f) in self.factors.iter().enumerate() {
            cum += f.dim();
            out.push((cum + alpha + 1 + r) as f64);
        }
        out
    }

    /// Weights `e_a(t)` for `t ∈ R^{K−1}`.
    pub fn weights(&self, t: &[f64]) -> Result<Vec<f64>> {
        if t.len() + 1 != self.k() {
            return Err(Error::ShapeMismatch(format!("expected {} weight parameters, got {}", self.k() - 1, t.len())));
        }
        Ok(self.weights_generic(t))
    }

    fn weights_generic<S: RealScalar>(&self, t: &[S]) -> Vec<S> {
        let k = self.k();
        let f = self.f_indices();
        let dims = self.factor_dims();
        let zero = t.first().map(|v| v.zero_like());
        (0..k)
            .map(|a| {
                // 0-based a: the weight e_{a+1} uses t_a (absent for the first) and t_{a+1..K-1}
                let mut expo = match &zero {
                    Some(z) => z.clone(),
                    None => unreachable!("K ≥ 2 gives at least one parameter"),
                };
                if a >= 1 {
                    expo = expo.sub_ref(&t[a - 1].scale(1.0 / (dims[a] as f64 + 1.0)));
                }
                for (lam, tl) in t.iter().enumerate().skip(a) {
                    expo = expo.add_ref(&tl.scale(1.0 / f[lam]));
                }
                expo.exp()
            })
            .collect()
    }

    /// `|Σ_a (n_a + 1) log e_a(t)|`; zero exactly when the weights keep the
    /// composition on a hypersphere level set.
    pub fn weight_balance(&self, t: &[f64]) -> Result<f64> {
        let e = self.weights(t)?;
        let dims = self.factor_dims();
        Ok(e.iter().zip(&dims).map(|(w, &d)| (d as f64 + 1.0) * w.ln()).sum::<f64>().abs())
    }

    /// Closed-form `(L₁, C)` of the composition.
    pub fn predicted_l1(&self) -> (f64, f64) {
        let n = self.dim() as f64;
        let mut prod = 1.0 / (n + 1.0);
        for a in 0..self.r {
            prod *= self.c[a] * self.c[a];
        }
        for (alpha, f) in self.factors.iter().enumerate() {
            let na = f.dim() as f64;
            let c = self.c[self.r + alpha];
            prod *= c.powf(2.0 * (na + 1.0)) / ((na + 1.0).powf(na + 1.0) * (-f.l1).powf(na + 2.0));
        }
        let cc = prod.powf(1.0 / (n + 2.0));
        (-1.0 / ((n + 1.0) * cc), cc)
    }

    pub fn build_composition(&self) -> CalabiChart {
        CalabiChart { spec: self.clone() }
    }

    /// Same factors with different constants.
    pub fn with_constants(&self, c: Vec<f64>) -> Result<Self> {
        CalabiSpec::new(self.r, self.factors.clone(), c)
    }

    pub fn label(&self) -> String {
        let mut parts: Vec<String> = vec!["point".into(); self.r];
        parts.extend(self.factors.iter().map(|f| f.chart.label()));
        format!("calabi({})", parts.join(","))
    }
}

/// The composed chart; parameters are `(t¹, …, t^{K−1}, p₁, …, p_s)`.
#[derive(Debug, Clone)]
pub struct CalabiChart {
    spec: CalabiSpec,
}

impl CalabiChart {
    pub fn spec(&self) -> &CalabiSpec {
        &self.spec
    }

    fn assemble<S: RealScalar>(&self, u: &[S], factor_values: Vec<Vec<S>>) -> Vec<S> {
        let k = self.spec.k();
        let e = self.spec.weights_generic(&u[..k - 1]);
        let mut x = Vec::with_capacity(self.spec.dim() + 1);
        for a in 0..self.spec.r {
            x.push(e[a].scale(self.spec.c[a]));
        }
        for (alpha, vals) in factor_values.into_iter().enumerate() {
            let a = self.spec.r + alpha;
            let w = e[a].scale(self.spec.c[a]);
            x.extend(vals.iter().map(|v| v.mul_ref(&w)));
        }
        x
    }

    fn factor_slices<'a, S>(&self, u: &'a [S]) -> Vec<&'a [S]> {
        let mut start = self.spec.k() - 1;
        self.spec
            .factors
            .iter()
            .map(|f| {
                let s = &u[start..start + f.dim()];
                start += f.dim();
                s
            })
            .collect()
    }

    fn check(&self, got: usize) -> Result<()> {
        if got != self.spec.dim() {
            return Err(Error::ShapeMismatch(format!(
                "composition of dimension {} evaluated at a point of dimension {got}",
                self.spec.dim()
            )));
        }
        Ok(())
    }
}

impl Chart for CalabiChart {
    fn label(&self) -> String {
        self.spec.label()
    }

    fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        let mut d = vec![(-0.3, 0.3); self.spec.k() - 1];
        for f in &self.spec.factors {
            d.extend(f.chart.domain());
        }
        d
    }

    fn eval(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check(u.len())?;
        let vals = self
            .factor_slices(u)
            .into_iter()
            .zip(&self.spec.factors)
            .map(|(p, f)| f.chart.eval(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.assemble(u, vals))
    }

    fn eval_jet(&self, u: &[Jet<f64>]) -> Result<Vec<Jet<f64>>> {
        self.check(u.len())?;
        let vals = self
            .factor_slices(u)
            .into_iter()
            .zip(&self.spec.factors)
            .map(|(p, f)| f.chart.eval_jet(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.assemble(u, vals))
    }

    fn jet_capable(&self) -> bool {
        self.spec.factors.iter().all(|f| f.chart.jet_capable())
    }
}

/// Closed-form against pipeline `L₁` at one point of the composition.
#[derive(Debug, Clone, Serialize)]
pub struct L1Audit {
    pub f: Vec<f64>,
    pub predicted_l1: f64,
    pub predicted_c: f64,
    pub numeric_l1: f64,
    pub error: f64,
    /// `|Σ (n_a + 1) log e_a|` at the sample point; nonzero would mean the
    /// weights leave the hypersphere level set.
    pub weight_balance: f64,
}

pub fn l1_audit(spec: &CalabiSpec, u: &[f64], backend: &DerivBackend) -> Result<L1Audit> {
    let (predicted_l1, predicted_c) = spec.predicted_l1();
    let inv = compute_invariants(&spec.build_composition(), u, backend)?;
    Ok(L1Audit {
        f: spec.f_indices(),
        predicted_l1,
        predicted_c,
        numeric_l1: inv.l1,
        error: (inv.l1 - predicted_l1).abs(),
        weight_balance: spec.weight_balance(&u[..spec.k() - 1])?,
    })
}

/// Invariants of one normalization in the equivalence audit.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizationRow {
    pub name: &'static str,
    pub c: Vec<f64>,
    pub l1: f64,
    pub j: f64,
    pub chi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub rows: Vec<NormalizationRow>,
    /// Largest spread of `L₁`, `J` or `χ` across the three normalizations.
    pub max_spread: f64,
}

/// Finds `s > 0` with `L₁(s) = target` by bisection on `log s`, given that
/// `L₁` is increasing in `s` (the composition grows and flattens).
fn solve_scale(target: f64, mut l1_of: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    // grow the bracket from c = 1 so extreme constants are only tried if needed
    let (mut lo, mut hi) = (-0.5f64, 0.5f64);
    let mut f_lo = l1_of(lo.exp())? - target;
    let mut f_hi = l1_of(hi.exp())? - target;
    while f_lo.signum() == f_hi.signum() {
        if hi >= 8.0 {
            return Err(Error::InvalidSpec("cannot bracket the normalization constant".into()));
        }
        lo -= 0.5;
        hi += 0.5;
        f_lo = l1_of(lo.exp())? - target;
        f_hi = l1_of(hi.exp())? - target;
    }
    let rising = f_hi > f_lo;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let v = l1_of(mid.exp())? - target;
        if (v > 0.0) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Builds `x`, `x̄ = c(e₁, …, e_K x_s)` and `x̃ = (e₁, …, c′e_K x_s)` with
/// `c`, `c′` chosen to match the `L₁` of `x`, and compares `(L₁, J, χ)` at `u`.
pub fn normalization_equivalence_audit(spec: &CalabiSpec, u: &[f64], backend: &DerivBackend) -> Result<EquivalenceReport> {
    let k = spec.k();
    let l1_of = |s: &CalabiSpec| -> Result<f64> { Ok(compute_invariants(&s.build_composition(), u, backend)?.l1) };
    let target = l1_of(spec)?;
    let c_bar = solve_scale(target, |c| l1_of(&spec.with_constants(vec![c; k])?))?;
    let tilde = |c: f64| {
        let mut v = vec![1.0; k];
        v[k - 1] = c;
        v
    };
    let c_tilde = solve_scale(target, |c| l1_of(&spec.with_constants(tilde(c))?))?;

    let variants = [
        ("x", spec.c.clone()),
        ("x_bar", vec![c_bar; k]),
        ("x_tilde", tilde(c_tilde)),
    ];
    let mut rows = Vec::new();
    for (name, c) in variants {
        let s = spec.with_constants(c.clone())?;
        let inv = compute_invariants(&s.build_composition(), u, backend)?;
        rows.push(NormalizationRow {
            name,
            c,
            l1: inv.l1,
            j: inv.j,
            chi: inv.chi,
        });
    }
    let spread = |f: fn(&NormalizationRow) -> f64| {
        let vals: Vec<f64> = rows.iter().map(f).collect();
        let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    };
    let max_spread = spread(|r| r.l1).max(spread(|r| r.j)).max(spread(|r| r.chi));
    Ok(EquivalenceReport { rows, max_spread })
}
