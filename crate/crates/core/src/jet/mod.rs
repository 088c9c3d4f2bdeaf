//! Truncated multivariate Taylor arithmetic ("jets").
//!
//! A [`Jet`] stores the Taylor coefficients of a function of `n_vars`
//! variables up to total degree `max_degree` (at most [`MAX_DEGREE`]) around an
//! expansion point. Coefficients are factorial-normalized, so the truncated
//! product is a plain convolution and `∂^α f = coeff(α) · α!`.
//!
//! Multi-indices are kept in graded lexicographic order: by total degree
//! first, then lexicographically *descending* on the exponent vector, so for
//! two variables the order is `1, u0, u1, u0², u0u1, u1², u0³, ...`. A useful
//! consequence is that the indices of degree `≤ d` form a prefix, so
//! truncating a jet to a lower degree is a slice.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, RealScalar, Scalar};

mod fd;

pub use fd::{fd_partial, fd_partials, fd_taylor, DerivBackend, DerivMode};

/// Largest truncation degree supported by the jet layer.
pub const MAX_DEGREE: usize = 4;

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u8>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// Unit index `e_var` in `n` variables.
    pub fn unit(n: usize, var: usize) -> Self {
        let mut e = vec![0; n];
        e[var] = 1;
        MultiIndex(e)
    }

    /// Builds the index of `∂_{vars[0]} ∂_{vars[1]} ...`.
    pub fn from_vars(n: usize, vars: &[usize]) -> Self {
        let mut e = vec![0u8; n];
        for &v in vars {
            e[v] += 1;
        }
        MultiIndex(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `α! = Π α_i!`
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&e| (1..=e as u64).product::<u64>() as f64)
            .product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Variables with multiplicity, e.g. `(2,1)` gives `[0, 0, 1]`.
    pub fn vars(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(v, &e)| std::iter::repeat_n(v, e as usize))
            .collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `C(n + d, d)`: number of monomials of degree `≤ d` in `n` variables.
pub fn monomial_count(n: usize, d: usize) -> usize {
    let mut c: u128 = 1;
    for i in 1..=d as u128 {
        c = c * (n as u128 + i) / i;
    }
    c as usize
}

struct MulTable {
    offsets: Vec<u32>,
    entries: Vec<(u32, u32)>,
}

/// Shared index tables for jets with a given number of variables and degree.
pub struct JetContext {
    n_vars: usize,
    max_degree: usize,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    degree_of: Vec<u8>,
    /// `block_end[d]` = number of indices of degree `≤ d`.
    block_end: Vec<usize>,
    mul_table: OnceLock<MulTable>,
    raise_table: OnceLock<Vec<u32>>,
}

impl fmt::Debug for JetContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JetContext")
            .field("n_vars", &self.n_vars)
            .field("max_degree", &self.max_degree)
            .finish()
    }
}

fn push_degree(n: usize, d: usize, prefix: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
    if prefix.len() == n - 1 {
        prefix.push(d as u8);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    for e in (0..=d).rev() {
        prefix.push(e as u8);
        push_degree(n, d - e, prefix, out);
        prefix.pop();
    }
}

impl JetContext {
    fn build(n_vars: usize, max_degree: usize) -> Self {
        let mut indices = Vec::with_capacity(monomial_count(n_vars, max_degree));
        let mut block_end = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            if n_vars == 0 {
                if d == 0 {
                    indices.push(MultiIndex(Vec::new()));
                }
            } else {
                push_degree(n_vars, d, &mut Vec::with_capacity(n_vars), &mut indices);
            }
            block_end.push(indices.len());
        }
        let lookup = indices
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let degree_of = indices.iter().map(|m| m.degree() as u8).collect();
        JetContext {
            n_vars,
            max_degree,
            indices,
            lookup,
            degree_of,
            block_end,
            mul_table: OnceLock::new(),
            raise_table: OnceLock::new(),
        }
    }

    /// Returns the shared context for `(n_vars, max_degree)`.
    pub fn get(n_vars: usize, max_degree: usize) -> Result<Arc<JetContext>> {
        if max_degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow {
                degree: max_degree,
                max_degree: MAX_DEGREE,
            });
        }
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("jet context cache poisoned");
        Ok(guard
            .entry((n_vars, max_degree))
            .or_insert_with(|| Arc::new(JetContext::build(n_vars, max_degree)))
            .clone())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn position(&self, mi: &MultiIndex) -> Option<usize> {
        self.lookup.get(mi).copied()
    }

    pub fn degree_of(&self, pos: usize) -> usize {
        self.degree_of[pos] as usize
    }

    /// Number of coefficients of degree `≤ d`.
    pub fn prefix_len(&self, d: usize) -> usize {
        self.block_end[d.min(self.max_degree)]
    }

    fn mul_table(&self) -> &MulTable {
        self.mul_table.get_or_init(|| {
            let mut offsets = Vec::with_capacity(self.len() + 1);
            let mut entries = Vec::new();
            let mut sum = vec![0u8; self.n_vars];
            offsets.push(0);
            for (i, a) in self.indices.iter().enumerate() {
                let room = self.max_degree - self.degree_of(i);
                for j in 0..self.block_end[room] {
                    for (s, (x, y)) in sum.iter_mut().zip(a.0.iter().zip(&self.indices[j].0)) {
                        *s = x + y;
                    }
                    let k = self.lookup[&MultiIndex(sum.clone())];
                    entries.push((j as u32, k as u32));
                }
                offsets.push(entries.len() as u32);
            }
            MulTable { offsets, entries }
        })
    }

    /// For derivative extraction: `raise[v * m + k]` is the position of
    /// `α_k + e_v` where `k` runs over the `m` indices of degree `< max_degree`.
    fn raise_table(&self) -> &[u32] {
        self.raise_table.get_or_init(|| {
            if self.max_degree == 0 {
                return Vec::new();
            }
            let m = self.block_end[self.max_degree - 1];
            let mut table = Vec::with_capacity(self.n_vars * m);
            for v in 0..self.n_vars {
                for k in 0..m {
                    let mut e = self.indices[k].clone();
                    e.0[v] += 1;
                    table.push(self.lookup[&e] as u32);
                }
            }
            table
        })
    }
}

/// Truncated multivariate Taylor expansion with coefficients in `T`.
#[derive(Clone)]
pub struct Jet<T: Coeff> {
    ctx: Arc<JetContext>,
    coeffs: Vec<T>,
}

impl<T: Coeff> fmt::Debug for Jet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("n_vars", &self.ctx.n_vars)
            .field("max_degree", &self.ctx.max_degree)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<T: Coeff> PartialEq for Jet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.coeffs == other.coeffs
    }
}

impl<T: Coeff> Jet<T> {
    pub fn constant(ctx: &Arc<JetContext>, value: T) -> Self {
        let mut coeffs = vec![T::zero(); ctx.len()];
        coeffs[0] = value;
        Jet {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &Arc<JetContext>) -> Self {
        Self::constant(ctx, T::zero())
    }

    /// Jet of the coordinate function `u_index` at `value`.
    pub fn seed_variable(index: usize, value: T, ctx: &Arc<JetContext>) -> Result<Self> {
        if index >= ctx.n_vars {
            return Err(Error::IndexOutOfRange {
                index,
                n_vars: ctx.n_vars,
            });
        }
        let mut jet = Self::constant(ctx, value);
        if ctx.max_degree >= 1 {
            // degree-1 block starts at 1 and lists u0, u1, ... in order
            jet.coeffs[1 + index] = T::one();
        }
        Ok(jet)
    }

    /// Seeds all variables at `point`.
    pub fn seed_point(point: &[T], ctx: &Arc<JetContext>) -> Result<Vec<Self>> {
        point
            .iter()
            .enumerate()
            .map(|(i, &v)| Self::seed_variable(i, v, ctx))
            .collect()
    }

    /// Builds a jet from factorial-normalized coefficients in context order.
    pub fn from_coeffs(ctx: &Arc<JetContext>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != ctx.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for a context of {}",
                coeffs.len(),
                ctx.len()
            )));
        }
        Ok(Jet {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    pub fn context(&self) -> &Arc<JetContext> {
        &self.ctx
    }

    pub fn n_vars(&self) -> usize {
        self.ctx.n_vars
    }

    pub fn max_degree(&self) -> usize {
        self.ctx.max_degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Constant term.
    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    pub fn same_context(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx)
            || (self.ctx.n_vars == other.ctx.n_vars && self.ctx.max_degree == other.ctx.max_degree)
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(
                self.ctx.n_vars,
                self.ctx.max_degree,
                other.ctx.n_vars,
                other.ctx.max_degree,
            ))
        }
    }

    /// Taylor coefficient of `mi`.
    pub fn coeff(&self, mi: &MultiIndex) -> Result<T> {
        self.position_of(mi).map(|p| self.coeffs[p])
    }

    fn position_of(&self, mi: &MultiIndex) -> Result<usize> {
        if mi.len() != self.ctx.n_vars {
            return Err(Error::ShapeMismatch(format!(
                "multi-index has {} entries, jet has {} variables",
                mi.len(),
                self.ctx.n_vars
            )));
        }
        if mi.degree() > self.ctx.max_degree {
            return Err(Error::DegreeOverflow {
                degree: mi.degree(),
                max_degree: self.ctx.max_degree,
            });
        }
        Ok(self.ctx.lookup[mi])
    }

    /// Mixed partial derivative `∂^mi f` at the expansion point.
    pub fn extract_partial(&self, mi: &MultiIndex) -> Result<T> {
        let p = self.position_of(mi)?;
        Ok(self.coeffs[p] * T::from_f64(mi.factorial()))
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == T::zero())
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if other.is_constant() {
            return self.scale_coeff(other.coeffs[0]);
        }
        let mut out = vec![T::zero(); self.coeffs.len()];
        self.accumulate_product(other, &mut out);
        Jet {
            ctx: self.ctx.clone(),
            coeffs: out,
        }
    }

    fn accumulate_product(&self, other: &Self, out: &mut [T]) {
        let table = self.ctx.mul_table();
        let zero = T::zero();
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == zero {
                continue;
            }
            let lo = table.offsets[i] as usize;
            let hi = table.offsets[i + 1] as usize;
            for &(j, k) in &table.entries[lo..hi] {
                let b = other.coeffs[j as usize];
                if b != zero {
                    out[k as usize] += a * b;
                }
            }
        }
    }

    pub fn scale_coeff(&self, s: T) -> Self {
        Jet {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert!(
            self.same_context(other),
            "jet context mismatch: ({}, {}) vs ({}, {})",
            self.ctx.n_vars,
            self.ctx.max_degree,
            other.ctx.n_vars,
            other.ctx.max_degree
        );
        Jet {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// `Σ_k series[k] · (self − self(0))^k`, the truncated composition of a
    /// function with known Taylor coefficients at the constant term.
    pub fn compose_series(&self, series: &[T]) -> Self {
        let mut nil = self.clone();
        nil.coeffs[0] = T::zero();
        let mut out = Self::constant(&self.ctx, series[0]);
        let mut power = Self::constant(&self.ctx, T::one());
        for &c in series.iter().take(self.ctx.max_degree + 1).skip(1) {
            power = power.mul_unchecked(&nil);
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += c * *p;
            }
        }
        out
    }

    /// Truncated `a^p` via the binomial series around the constant term.
    pub fn pow_real(&self, p: f64) -> Result<Self> {
        let a0 = self.value();
        let re = a0.real();
        if !(re > 0.0) || (a0 - T::from_f64(re)).abs() > 0.0 {
            return Err(Error::NonPositiveBase(re));
        }
        // a^p = a₀^p (a/a₀)^p keeps tiny or huge bases in range
        let unit = self.map_coeffs(|c| c * T::from_f64(1.0 / re));
        let mut series = Vec::with_capacity(self.ctx.max_degree + 1);
        let mut binom = 1.0;
        for k in 0..=self.ctx.max_degree {
            series.push(T::from_f64(binom));
            binom *= (p - k as f64) / (k as f64 + 1.0);
        }
        let lead = T::from_f64(re.powf(p));
        Ok(unit.compose_series(&series).map_coeffs(|c| c * lead))
    }

    pub fn exp(&self) -> Self {
        let e0 = self.value().exp();
        let mut series = Vec::with_capacity(self.ctx.max_degree + 1);
        let mut fact = 1.0;
        for k in 0..=self.ctx.max_degree {
            if k > 0 {
                fact *= k as f64;
            }
            series.push(e0 * T::from_f64(1.0 / fact));
        }
        self.compose_series(&series)
    }

    /// `1 / a`; the constant term must be nonzero.
    pub fn recip(&self) -> Self {
        let inv = T::one() / self.value();
        let mut series = Vec::with_capacity(self.ctx.max_degree + 1);
        let mut term = inv;
        for _ in 0..=self.ctx.max_degree {
            series.push(term);
            term = -(term * inv);
        }
        self.compose_series(&series)
    }

    /// Partial derivative `∂_var` as a jet of one degree lower.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < self.ctx.n_vars, "derivative variable out of range");
        let d = self.ctx.max_degree;
        if d == 0 {
            return Self::zero(&self.ctx);
        }
        let lower = JetContext::get(self.ctx.n_vars, d - 1).expect("degree within range");
        let m = lower.len();
        let raise = &self.ctx.raise_table()[var * m..(var + 1) * m];
        let coeffs = raise
            .iter()
            .zip(lower.indices())
            .map(|(&pos, mi)| self.coeffs[pos as usize] * T::from_f64(mi.0[var] as f64 + 1.0))
            .collect();
        Jet { ctx: lower, coeffs }
    }

    /// Drops every coefficient above degree `degree`.
    pub fn truncate(&self, degree: usize) -> Self {
        if degree >= self.ctx.max_degree {
            return self.clone();
        }
        let ctx = JetContext::get(self.ctx.n_vars, degree).expect("degree within range");
        let len = ctx.len();
        Jet {
            ctx,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    pub fn map_coeffs<U: Coeff>(&self, f: impl Fn(T) -> U) -> Jet<U> {
        Jet {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

impl Jet<f64> {
    pub fn to_complex(&self) -> Jet<Complex64> {
        self.map_coeffs(|c| Complex64::new(c, 0.0))
    }
}

impl Jet<Complex64> {
    pub fn re(&self) -> Jet<f64> {
        self.map_coeffs(|c| c.re)
    }
}

impl<T: Coeff> Add for Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl<T: Coeff> Sub for Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl<T: Coeff> Mul for Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("jet context mismatch")
    }
}

impl<T: Coeff> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Self {
        self.map_coeffs(|c| -c)
    }
}

impl<T: Coeff> Add for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: Self) -> Jet<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Coeff> Sub for &Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: Self) -> Jet<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Coeff> Mul for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: Self) -> Jet<T> {
        self.try_mul(rhs).expect("jet context mismatch")
    }
}

impl<T: Coeff> Scalar for Jet<T> {
    fn zero_like(&self) -> Self {
        Jet::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        Jet::constant(&self.ctx, T::one())
    }
    fn from_f64_like(&self, v: f64) -> Self {
        Jet::constant(&self.ctx, T::from_f64(v))
    }
    fn scale(&self, s: f64) -> Self {
        self.scale_coeff(T::from_f64(s))
    }
    fn recip(&self) -> Self {
        Jet::recip(self)
    }
    fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }
    fn magnitude(&self) -> f64 {
        self.coeffs[0].abs()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        assert!(a.same_context(b) && self.same_context(a), "jet context mismatch");
        if b.is_constant() {
            let s = b.coeffs[0];
            for (o, &c) in self.coeffs.iter_mut().zip(&a.coeffs) {
                *o += c * s;
            }
        } else {
            a.accumulate_product(b, &mut self.coeffs);
        }
    }
}

impl RealScalar for Jet<f64> {
    type Complex = Jet<Complex64>;

    fn exp(&self) -> Self {
        Jet::exp(self)
    }
    fn powf(&self, p: f64) -> Self {
        self.pow_real(p)
            .unwrap_or_else(|_| self.map_coeffs(|_| f64::NAN))
    }
    fn complexify(&self) -> Jet<Complex64> {
        self.to_complex()
    }
    fn complex_scale(&self, z: Complex64) -> Jet<Complex64> {
        self.map_coeffs(|c| z * c)
    }
    fn real_part(z: &Jet<Complex64>) -> Self {
        z.re()
    }
    fn imag_part(z: &Jet<Complex64>) -> Self {
        z.map_coeffs(|c| c.im)
    }
    fn value(&self) -> f64 {
        self.coeffs[0]
    }
}
