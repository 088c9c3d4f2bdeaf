//! Independent oracles shared by the integration tests. Nothing here calls
//! the invariant pipeline.

#![allow(dead_code)]

use equiaffine::blaschke::Chart;

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    d
}

/// `x`, `∂ᵢx` and `∂ᵢ∂ⱼx` by central differences with step `h`.
pub fn second_order_jet(chart: &dyn Chart, u: &[f64], h: f64) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<Vec<f64>>>) {
    let n = u.len();
    let f = |du: &[(usize, f64)]| {
        let mut v = u.to_vec();
        for &(i, d) in du {
            v[i] += d;
        }
        chart.eval(&v).unwrap()
    };
    let x = f(&[]);
    let m = x.len();
    let first: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let (p, q) = (f(&[(i, h)]), f(&[(i, -h)]));
            (0..m).map(|a| (p[a] - q[a]) / (2.0 * h)).collect()
        })
        .collect();
    let mut second = vec![vec![vec![0.0; m]; n]; n];
    for i in 0..n {
        for j in i..n {
            let v: Vec<f64> = if i == j {
                let (p, q) = (f(&[(i, h)]), f(&[(i, -h)]));
                (0..m).map(|a| (p[a] - 2.0 * x[a] + q[a]) / (h * h)).collect()
            } else {
                let pp = f(&[(i, h), (j, h)]);
                let pm = f(&[(i, h), (j, -h)]);
                let mp = f(&[(i, -h), (j, h)]);
                let mm = f(&[(i, -h), (j, -h)]);
                (0..m).map(|a| (pp[a] - pm[a] - mp[a] + mm[a]) / (4.0 * h * h)).collect()
            };
            second[i][j] = v.clone();
            second[j][i] = v;
        }
    }
    (x, first, second)
}

/// Affine mean curvature of a hypersphere centered at the origin.
///
/// With transversal `ζ = −x`, write `x_ij = Γᵏ_ij x_k + s_ij ζ` and
/// `θ = det(x₁, …, xₙ, ζ)`. Then `s = L₁g` and `det(x₁, …, xₙ, L₁ζ)² = det g`,
/// so `L₁ⁿ⁺² = det(s)/θ²`, with the sign of `L₁` that of the definite form `s`.
pub fn centered_l1(chart: &dyn Chart, u: &[f64], h: f64) -> f64 {
    let (x, first, second) = second_order_jet(chart, u, h);
    let n = u.len();
    let frame_with = |last: &[f64]| -> f64 {
        let cols: Vec<&[f64]> = first.iter().map(|c| c.as_slice()).chain(std::iter::once(last)).collect();
        let rows: Vec<Vec<f64>> = (0..=n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        det(rows)
    };
    let zeta: Vec<f64> = x.iter().map(|v| -v).collect();
    let theta = frame_with(&zeta);
    let s: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| frame_with(&second[i][j]) / theta).collect()).collect();
    let sign = s[0][0].signum();
    sign * (det(s).abs() / (theta * theta)).powf(1.0 / (n as f64 + 2.0))
}

/// Random matrix with determinant exactly one after normalization.
pub fn unimodular(n: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 } + rng.random_range(-0.4..0.4)).collect())
        .collect();
    let d = det(a.clone());
    if d < 0.0 {
        a[0].iter_mut().for_each(|v| *v = -*v);
    }
    let s = d.abs().powf(-1.0 / n as f64);
    a.iter_mut().for_each(|row| row.iter_mut().for_each(|v| *v *= s));
    a
}

pub fn max_abs<'a>(it: impl IntoIterator<Item = &'a f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}
