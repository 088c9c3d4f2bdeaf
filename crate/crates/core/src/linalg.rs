//! Dense matrices over a generic [`Scalar`]: plain reals and complexes as well
//! as real and complex jets.
//!
//! Pivoting always looks at [`Scalar::magnitude`], which for a jet is the
//! magnitude of its constant term; a jet is invertible exactly when its
//! constant term is.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pivots below this magnitude count as zero.
pub const PIVOT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Clone> Matrix<S> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_columns(cols: &[Vec<S>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::ShapeMismatch("ragged columns".into()));
        }
        Ok(Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<T: Clone>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<S: Scalar> Matrix<S> {
    /// All-zero matrix whose entries share `template`'s context.
    pub fn zeros_like(rows: usize, cols: usize, template: &S) -> Self {
        let z = template.zero_like();
        Matrix {
            rows,
            cols,
            data: vec![z; rows * cols],
        }
    }

    pub fn identity_like(n: usize, template: &S) -> Self {
        let z = template.zero_like();
        let o = template.one_like();
        Self::from_fn(n, n, |r, c| if r == c { o.clone() } else { z.clone() })
    }

    fn template(&self) -> &S {
        &self.data[0]
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|x| x.scale(s))
    }

    pub fn scale_by(&self, s: &S) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub_ref(b)).collect(),
        })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros_like(self.rows, other.cols, self.template());
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[r * self.cols + k];
                for c in 0..other.cols {
                    out.data[r * other.cols + c].mul_add_assign(a, &other.data[k * other.cols + c]);
                }
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn matmul(&self, other: &Self) -> Self {
        self.try_matmul(other).expect("matrix shape mismatch")
    }

    pub fn mat_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = self.template().zero_like();
                for (c, x) in v.iter().enumerate() {
                    acc.mul_add_assign(&self[(r, c)], x);
                }
                acc
            })
            .collect())
    }

    pub fn trace(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("trace of a non-square matrix".into()));
        }
        let mut acc = self.template().zero_like();
        for i in 0..self.rows {
            acc = acc.add_ref(&self[(i, i)]);
        }
        Ok(acc)
    }

    /// Max absolute column sum of entry magnitudes.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self[(r, c)].magnitude()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// LU factorization with partial pivoting on entry magnitude.
    pub fn lu(&self) -> Result<Lu<S>> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("LU of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|r| (r, a[(r, k)].magnitude()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(best >= PIVOT_FLOOR) {
                return Err(Error::Singular);
            }
            if p != k {
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let inv = a[(k, k)].recip();
            for r in k + 1..n {
                let f = a[(r, k)].mul_ref(&inv);
                for c in k + 1..n {
                    let t = f.mul_ref(&a[(k, c)]);
                    a[(r, c)] = a[(r, c)].sub_ref(&t);
                }
                a[(r, k)] = f;
            }
        }
        Ok(Lu { lu: a, perm, sign })
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> Result<S> {
        let lu = self.lu()?;
        Ok(lu.det())
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if rhs.rows != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side has {} rows, system has {}",
                rhs.rows, self.rows
            )));
        }
        self.lu()?.solve(rhs)
    }

    pub fn inverse(&self) -> Result<Self> {
        let id = Self::identity_like(self.rows, self.template());
        self.solve(&id)
    }

    /// Matrix exponential by scaling and squaring with a degree-18 Taylor
    /// polynomial; the scaled norm is at most 1/2.
    pub fn exp(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("exponential of a non-square matrix".into()));
        }
        let norm = self.norm1();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as i32
        } else {
            0
        };
        let scaled = self.scale(0.5f64.powi(squarings));
        let id = Self::identity_like(self.rows, self.template());
        // Horner: I + A(I + A/2(I + A/3(...)))
        let mut acc = id.clone();
        for k in (1..=18).rev() {
            acc = id.try_add(&scaled.matmul(&acc).scale(1.0 / k as f64))?;
        }
        for _ in 0..squarings {
            acc = acc.matmul(&acc);
        }
        Ok(acc)
    }
}

/// Packed LU factors.
#[derive(Debug, Clone)]
pub struct Lu<S> {
    lu: Matrix<S>,
    perm: Vec<usize>,
    sign: f64,
}

impl<S: Scalar> Lu<S> {
    pub fn det(&self) -> S {
        let n = self.lu.rows;
        let mut d = self.lu[(0, 0)].scale(self.sign);
        for i in 1..n {
            d = d.mul_ref(&self.lu[(i, i)]);
        }
        d
    }

    pub fn solve(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        let n = self.lu.rows;
        if rhs.rows != n {
            return Err(Error::ShapeMismatch("rhs rows".into()));
        }
        let m = rhs.cols;
        let mut x = Matrix::from_fn(n, m, |r, c| rhs[(self.perm[r], c)].clone());
        for c in 0..m {
            for r in 1..n {
                for k in 0..r {
                    let t = self.lu[(r, k)].mul_ref(&x[(k, c)]);
                    x[(r, c)] = x[(r, c)].sub_ref(&t);
                }
            }
            for r in (0..n).rev() {
                for k in r + 1..n {
                    let t = self.lu[(r, k)].mul_ref(&x[(k, c)]);
                    x[(r, c)] = x[(r, c)].sub_ref(&t);
                }
                x[(r, c)] = x[(r, c)].mul_ref(&self.lu[(r, r)].recip());
            }
        }
        Ok(x)
    }
}
