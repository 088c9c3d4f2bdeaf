use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

/// Octonion in the basis `1, e₁, …, e₇`.
///
/// Built by Cayley–Dickson doubling of the quaternions `H = span(1, e₁, e₂, e₃)`
/// with `(a, b)(c, d) = (ac − d̄b, da + bc̄)` and `e₄ = (0, 1)`,
/// `e₅ = (0, e₁)`, `e₆ = (0, e₂)`, `e₇ = (0, e₃)`. Thus `e₁e₂ = e₃` and `e₁e₄ = e₅`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Octonion(pub [f64; 8]);

type Quat = [f64; 4];

fn qmul(a: &Quat, b: &Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qconj(a: &Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    /// `e_k`, with `e₀ = 1`.
    pub fn basis(k: usize) -> Self {
        let mut c = [0.0; 8];
        c[k] = 1.0;
        Octonion(c)
    }

    pub fn real(r: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = r;
        Octonion(c)
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn conj(&self) -> Self {
        let mut c = self.0.map(|v| -v);
        c[0] = self.0[0];
        Octonion(c)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `Re(a b̄)`, the Euclidean inner product of the components.
    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Octonion(self.0.map(|v| v * s))
    }

    fn halves(&self) -> (Quat, Quat) {
        let c = &self.0;
        ([c[0], c[1], c[2], c[3]], [c[4], c[5], c[6], c[7]])
    }

    /// Independent components uniform on `[−1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut c = [0.0; 8];
        for v in &mut c {
            *v = rng.sample::<f64, _>(unit_uniform());
        }
        Octonion(c)
    }
}

fn unit_uniform() -> rand::distr::Uniform<f64> {
    rand::distr::Uniform::new_inclusive(-1.0, 1.0).expect("valid range")
}

impl Mul for Octonion {
    type Output = Octonion;

    fn mul(self, rhs: Octonion) -> Octonion {
        let (a, b) = self.halves();
        let (c, d) = rhs.halves();
        let ac = qmul(&a, &c);
        let db = qmul(&qconj(&d), &b);
        let da = qmul(&d, &a);
        let bc = qmul(&b, &qconj(&c));
        Octonion([
            ac[0] - db[0],
            ac[1] - db[1],
            ac[2] - db[2],
            ac[3] - db[3],
            da[0] + bc[0],
            da[1] + bc[1],
            da[2] + bc[2],
            da[3] + bc[3],
        ])
    }
}

impl Add for Octonion {
    type Output = Octonion;

    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        c.iter_mut().zip(&rhs.0).for_each(|(a, b)| *a += b);
        Octonion(c)
    }
}

impl Sub for Octonion {
    type Output = Octonion;

    fn sub(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        c.iter_mut().zip(&rhs.0).for_each(|(a, b)| *a -= b);
        Octonion(c)
    }
}

impl Neg for Octonion {
    type Output = Octonion;

    fn neg(self) -> Octonion {
        Octonion(self.0.map(|v| -v))
    }
}

/// Multiplication `a·b`.
pub fn octonion_mul(a: &Octonion, b: &Octonion) -> Octonion {
    *a * *b
}
