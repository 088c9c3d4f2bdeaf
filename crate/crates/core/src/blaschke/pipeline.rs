use ndarray::{Array1, Array2, Array3, Array4};

use super::chart::Chart;
use crate::error::{Error, Result};
use crate::jet::{fd_taylor, DerivBackend, DerivMode, Jet, JetContext};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

type J = Jet<f64>;

/// Every equiaffine quantity of a chart at one parameter point.
///
/// Index layout: `christoffel[[i, j, k]] = Γ̂ᵏᵢⱼ`, `a_mixed[[i, j, k]] = Aᵏᵢⱼ`,
/// `b_mixed[[i, j]] = Bⁱⱼ` (so `B(eⱼ) = Σᵢ Bⁱⱼ eᵢ`),
/// `r_low[[i, j, k, l]] = g(R(eᵢ, eⱼ)eₖ, eₗ)` and `nabla_a[[i, j, k, l]] = A_{ijk,l}`.
#[derive(Debug, Clone)]
pub struct PointInvariants {
    pub u: Vec<f64>,
    /// Chart value `x(u)`.
    pub x: Array1<f64>,
    pub h: Array2<f64>,
    pub det_h: f64,
    pub g: Array2<f64>,
    pub g_inv: Array2<f64>,
    pub christoffel: Array3<f64>,
    pub xi: Array1<f64>,
    pub a_low: Array3<f64>,
    pub a_mixed: Array3<f64>,
    pub b_mixed: Array2<f64>,
    pub b_low: Array2<f64>,
    pub l1: f64,
    pub j: f64,
    pub chi: f64,
    pub r_low: Array4<f64>,
    pub nabla_a: Array4<f64>,
    /// Normal component `νᵢ` of `∂ᵢξ` in the frame `(x₁, …, xₙ, ξ)`; zero in theory.
    pub weingarten_normal: Array1<f64>,
    /// `max |c − g|` for the `ξ`-component `c` of the frame solve.
    pub frame_residual: f64,
    /// `A` recomputed from the covariant derivative of `h`.
    pub a_from_h: Array3<f64>,
    /// Whether `h` had to be negated to become positive definite.
    pub flipped: bool,
}

/// Degree-4 Taylor jets of the chart at `u` from the chosen backend.
pub fn taylor_jets(chart: &dyn Chart, u: &[f64], backend: &DerivBackend) -> Result<Vec<J>> {
    let n = chart.dim();
    if u.len() != n {
        return Err(Error::ShapeMismatch(format!("point of dimension {} for a chart of dimension {n}", u.len())));
    }
    let x = match backend.mode {
        DerivMode::Jets => {
            if !chart.jet_capable() {
                return Err(Error::UnsupportedBackend(chart.label()));
            }
            let ctx = JetContext::get(n, 4)?;
            let seeds = Jet::seed_point(u, &ctx)?;
            chart.eval_jet(&seeds)?
        }
        DerivMode::FiniteDifference => {
            let m = chart.ambient_dim();
            let f = |v: &[f64]| chart.eval(v).unwrap_or_else(|_| vec![f64::NAN; m]);
            fd_taylor(&f, u, 4, backend)?
        }
    };
    if x.len() != n + 1 {
        return Err(Error::ShapeMismatch(format!("chart returned {} components, expected {}", x.len(), n + 1)));
    }
    if x.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(x)
}

/// Runs the full pipeline at `u`.
pub fn compute_invariants(chart: &dyn Chart, u: &[f64], backend: &DerivBackend) -> Result<PointInvariants> {
    let x = taylor_jets(chart, u, backend)?;
    invariants_from_taylor(u, &x)
}

fn positive_definite(m: &Array2<f64>) -> bool {
    let n = m.nrows();
    let mut l = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut d = m[[j, j]];
        for k in 0..j {
            d -= l[[j, k]] * l[[j, k]];
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[[j, j]] = d;
        for i in j + 1..n {
            let mut s = m[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = s / d;
        }
    }
    true
}

fn values(m: &Matrix<J>) -> Array2<f64> {
    Array2::from_shape_fn((m.rows(), m.cols()), |(r, c)| m[(r, c)].value())
}

/// Cofactors of the last column of `[x₁ … xₙ | ·]`: the conormal at the base point.
fn conormal_at(xd: &Array2<f64>) -> Result<Vec<f64>> {
    let m = xd.nrows();
    let n = m - 1;
    let mut nu = Vec::with_capacity(m);
    for a in 0..m {
        let minor = Matrix::from_fn(n, n, |r, c| {
            let row = if r < a { r } else { r + 1 };
            xd[[row, c]]
        });
        let d = match minor.det() {
            Ok(d) => d,
            Err(Error::Singular) => 0.0,
            Err(e) => return Err(e),
        };
        nu.push(if (a + n).is_multiple_of(2) { d } else { -d });
    }
    Ok(nu)
}

/// Pipeline on already-computed degree-4 Taylor jets `x` (one per ambient
/// coordinate) expanded at `u`.
pub fn invariants_from_taylor(u: &[f64], x: &[J]) -> Result<PointInvariants> {
    let m = x.len();
    if m < 2 {
        return Err(Error::ShapeMismatch("need n ≥ 1".into()));
    }
    let n = m - 1;
    if x[0].n_vars() != n || x[0].max_degree() < 4 {
        return Err(Error::ShapeMismatch(format!(
            "expected degree-4 jets in {n} variables, got degree {} in {}",
            x[0].max_degree(),
            x[0].n_vars()
        )));
    }
    let nf = n as f64;

    // first and second partials of x
    let xd: Vec<Vec<J>> = (0..n).map(|i| x.iter().map(|c| c.derivative(i)).collect()).collect();
    let mut xdd: Vec<Vec<Vec<J>>> = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v: Vec<J> = xd[i].iter().map(|c| c.derivative(j)).collect();
            xdd[j][i] = v.clone();
            xdd[i][j] = v;
        }
    }
    let trunc = |v: &[J], d: usize| -> Vec<J> { v.iter().map(|c| c.truncate(d)).collect() };

    // conormal ν with h_ij = ν · x_ij
    let xd0 = Array2::from_shape_fn((m, n), |(a, i)| xd[i][a].value());
    let nu0 = conormal_at(&xd0)?;
    let nu0_norm = nu0.iter().map(|v| v * v).sum::<f64>().sqrt();
    let col_norms: f64 = (0..n).map(|i| xd0.column(i).dot(&xd0.column(i)).sqrt()).product();
    if !(nu0_norm > 1e-12 * col_norms) {
        return Err(Error::DegenerateHypersurface(nu0_norm));
    }
    let ctx2 = JetContext::get(n, 2)?;
    let xd2: Vec<Vec<J>> = xd.iter().map(|v| trunc(v, 2)).collect();
    let frame = Matrix::from_fn(m, m, |r, c| {
        if c < n {
            xd2[c][r].clone()
        } else {
            J::constant(&ctx2, nu0[r])
        }
    });
    // det(F) · (last row of F⁻¹) by one solve with Fᵀ
    let lu = frame.transpose().lu()?;
    let det_f = lu.det();
    let mut e_last = Matrix::zeros_like(m, 1, &det_f);
    e_last[(n, 0)] = det_f.one_like();
    let row = lu.solve(&e_last)?;
    let nu: Vec<J> = (0..m).map(|a| row[(a, 0)].mul_ref(&det_f)).collect();

    let mut h = Matrix::from_fn(n, n, |i, j| {
        let mut acc = J::zero(&ctx2);
        for a in 0..m {
            acc.mul_add_assign(&nu[a], &xdd[i][j][a]);
        }
        acc
    });
    let h0 = values(&h);
    let scale = h0.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let det_h0 = Matrix::from_fn(n, n, |i, j| h0[[i, j]]).det().unwrap_or(0.0);
    if !(det_h0.abs() > 1e-12 * scale.powi(n as i32)) {
        return Err(Error::DegenerateHypersurface(det_h0));
    }
    let flipped = if positive_definite(&h0) {
        false
    } else if positive_definite(&h0.mapv(|v| -v)) {
        true
    } else {
        return Err(Error::NotConvex);
    };
    if flipped {
        h = h.scale(-1.0);
    }

    // Blaschke metric g = H^{-1/(n+2)} h, to degree 2
    let det_h = h.det()?;
    let hpow = det_h.pow_real(-1.0 / (nf + 2.0))?;
    let g2 = h.scale_by(&hpow);
    let g1 = g2.map(|v| v.truncate(1));
    let ginv1 = g1.inverse()?;
    let dg: Vec<Matrix<J>> = (0..n).map(|l| g2.map(|v| v.derivative(l))).collect();

    // Levi-Civita symbols of g (degree 1)
    let ctx1 = JetContext::get(n, 1)?;
    let mut gamma_hat = vec![vec![vec![J::zero(&ctx1); n]; n]; n];
    for i in 0..n {
        for j in i..n {
            let lowered: Vec<J> = (0..n)
                .map(|l| (&(&dg[i][(j, l)] + &dg[j][(i, l)]) - &dg[l][(i, j)]).scale(0.5))
                .collect();
            for k in 0..n {
                let mut acc = J::zero(&ctx1);
                for l in 0..n {
                    acc.mul_add_assign(&ginv1[(k, l)], &lowered[l]);
                }
                gamma_hat[i][j][k] = acc.clone();
                gamma_hat[j][i][k] = acc;
            }
        }
    }

    // affine normal ξ = (1/n) g^{ij}(x_ij − Γ̂ᵏᵢⱼ x_k), degree 1
    let xd1: Vec<Vec<J>> = xd.iter().map(|v| trunc(v, 1)).collect();
    let xdd1: Vec<Vec<Vec<J>>> = xdd.iter().map(|r| r.iter().map(|v| trunc(v, 1)).collect()).collect();
    let xi: Vec<J> = (0..m)
        .map(|a| {
            let mut acc = J::zero(&ctx1);
            for i in 0..n {
                for j in 0..n {
                    let mut t = xdd1[i][j][a].clone();
                    for k in 0..n {
                        t = &t - &(&gamma_hat[i][j][k] * &xd1[k][a]);
                    }
                    acc.mul_add_assign(&ginv1[(i, j)], &t);
                }
            }
            acc.scale(1.0 / nf)
        })
        .collect();

    // frame (x₁, …, xₙ, ξ)
    let frame1 = Matrix::from_fn(m, m, |r, c| if c < n { xd1[c][r].clone() } else { xi[r].clone() });
    let frame0 = values(&frame1);
    let xi_norm = frame0.column(n).dot(&frame0.column(n)).sqrt();
    let det0 = Matrix::from_fn(m, m, |r, c| frame0[[r, c]]).det().unwrap_or(0.0);
    if !(det0.abs() > 1e-10 * col_norms * xi_norm) {
        return Err(Error::TangentialNormal(det0));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let rhs = Matrix::from_fn(m, pairs.len(), |r, c| {
        let (i, j) = pairs[c];
        xdd1[i][j][r].clone()
    });
    let sol = frame1.solve(&rhs)?;
    let mut gamma = vec![vec![vec![J::zero(&ctx1); n]; n]; n];
    let mut frame_residual = 0.0f64;
    for (c, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..n {
            gamma[i][j][k] = sol[(k, c)].clone();
            gamma[j][i][k] = sol[(k, c)].clone();
        }
        frame_residual = frame_residual.max((&sol[(n, c)] - &g1[(i, j)]).max_abs());
    }

    // Fubini-Pick form
    let mut a_mixed1 = vec![vec![vec![J::zero(&ctx1); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                a_mixed1[i][j][k] = &gamma[i][j][k] - &gamma_hat[i][j][k];
            }
        }
    }
    let mut a_low1 = vec![vec![vec![J::zero(&ctx1); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = J::zero(&ctx1);
                for l in 0..n {
                    acc.mul_add_assign(&g1[(k, l)], &a_mixed1[i][j][l]);
                }
                a_low1[i][j][k] = acc;
            }
        }
    }

    // shape operator from ∂ᵢξ = −Bᵏᵢ xₖ + νᵢ ξ
    let fm = Matrix::from_fn(m, m, |r, c| frame0[[r, c]]);
    let dxi = Matrix::from_fn(m, n, |a, i| xi[a].derivative(i).value());
    let coef = fm.solve(&dxi)?;
    let b_mixed = Array2::from_shape_fn((n, n), |(k, i)| -coef[(k, i)]);
    let weingarten_normal = Array1::from_shape_fn(n, |i| coef[(n, i)]);

    let g = values(&g1);
    let g_inv = values(&ginv1);
    let b_low = Array2::from_shape_fn((n, n), |(i, j)| (0..n).map(|k| b_mixed[[k, i]] * g[[k, j]]).sum());
    let l1 = b_mixed.diag().sum() / nf;

    let gh = Array3::from_shape_fn((n, n, n), |(i, j, k)| gamma_hat[i][j][k].value());
    // dgh[[a, i, j, k]] = ∂_a Γ̂ᵏᵢⱼ
    let dgh = Array4::from_shape_fn((n, n, n, n), |(a, i, j, k)| gamma_hat[i][j][k].derivative(a).value());
    let r_low = curvature_tensor(&g, &gh, &dgh);

    let a_low = Array3::from_shape_fn((n, n, n), |(i, j, k)| a_low1[i][j][k].value());
    let a_mixed = Array3::from_shape_fn((n, n, n), |(i, j, k)| a_mixed1[i][j][k].value());
    let da = Array4::from_shape_fn((n, n, n, n), |(i, j, k, l)| a_low1[i][j][k].derivative(l).value());
    let nabla_a = covariant_derivative_a(&a_low, &da, &gh);
    let (j_inv, chi) = pick_and_chi(&g_inv, &a_low, &r_low);

    // A from the covariant derivative of h along the induced connection
    let h_val = values(&h);
    let det_h_val = det_h.value();
    let tau: Vec<f64> = (0..n)
        .map(|k| -det_h.derivative(k).value() / det_h_val / (nf + 2.0))
        .collect();
    let gamma0 = Array3::from_shape_fn((n, n, n), |(i, j, k)| gamma[i][j][k].value());
    let hpow0 = det_h_val.powf(-1.0 / (nf + 2.0));
    let a_from_h = Array3::from_shape_fn((n, n, n), |(i, j, k)| {
        let mut v = h[(i, j)].derivative(k).value() + tau[k] * h_val[[i, j]];
        for p in 0..n {
            v -= gamma0[[k, i, p]] * h_val[[p, j]] + gamma0[[k, j, p]] * h_val[[i, p]];
        }
        -0.5 * hpow0 * v
    });

    Ok(PointInvariants {
        u: u.to_vec(),
        x: Array1::from_iter(x.iter().map(|c| c.value())),
        h: h_val,
        det_h: det_h_val,
        g,
        g_inv,
        christoffel: gh,
        xi: Array1::from_iter(xi.iter().map(|c| c.value())),
        a_low,
        a_mixed,
        b_mixed,
        b_low,
        l1,
        j: j_inv,
        chi,
        r_low,
        nabla_a,
        weingarten_normal,
        frame_residual,
        a_from_h,
        flipped,
    })
}

/// `R_{ijkl} = g(R(eᵢ, eⱼ)eₖ, eₗ)` with `R(X, Y) = [∇_X, ∇_Y] − ∇_{[X,Y]}`,
/// from `Γ̂` (`gh[[i, j, k]] = Γ̂ᵏᵢⱼ`) and its first derivatives
/// (`dgh[[a, i, j, k]] = ∂ₐΓ̂ᵏᵢⱼ`).
pub fn curvature_tensor(g: &Array2<f64>, gh: &Array3<f64>, dgh: &Array4<f64>) -> Array4<f64> {
    let n = g.nrows();
    // Rˡᵢⱼₖ
    let mut r_up = Array4::<f64>::zeros((n, n, n, n));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = dgh[[i, j, k, l]] - dgh[[j, i, k, l]];
                    for p in 0..n {
                        v += gh[[i, p, l]] * gh[[j, k, p]] - gh[[j, p, l]] * gh[[i, k, p]];
                    }
                    r_up[[i, j, k, l]] = v;
                }
            }
        }
    }
    Array4::from_shape_fn((n, n, n, n), |(i, j, k, l)| (0..n).map(|p| r_up[[i, j, k, p]] * g[[p, l]]).sum())
}

/// `A_{ijk,l} = ∂ₗA_{ijk} − Γ̂ᵐₗᵢA_{mjk} − Γ̂ᵐₗⱼA_{imk} − Γ̂ᵐₗₖA_{ijm}` with
/// `da[[i, j, k, l]] = ∂ₗA_{ijk}`.
pub fn covariant_derivative_a(a: &Array3<f64>, da: &Array4<f64>, gh: &Array3<f64>) -> Array4<f64> {
    let n = a.shape()[0];
    Array4::from_shape_fn((n, n, n, n), |(i, j, k, l)| {
        let mut v = da[[i, j, k, l]];
        for p in 0..n {
            v -= gh[[l, i, p]] * a[[p, j, k]] + gh[[l, j, p]] * a[[i, p, k]] + gh[[l, k, p]] * a[[i, j, p]];
        }
        v
    })
}

/// Raises the last index of a cubic form: `out[[i, j, k]] = Σₗ gᵏˡ A_{ijl}`.
pub fn raise_last(g_inv: &Array2<f64>, a: &Array3<f64>) -> Array3<f64> {
    let n = g_inv.nrows();
    Array3::from_shape_fn((n, n, n), |(i, j, k)| (0..n).map(|l| g_inv[[k, l]] * a[[i, j, l]]).sum())
}

/// Pick invariant `J` and normalized scalar curvature `χ`.
pub fn pick_and_chi(g_inv: &Array2<f64>, a_low: &Array3<f64>, r_low: &Array4<f64>) -> (f64, f64) {
    let n = g_inv.nrows();
    // on curves A and R vanish identically and both invariants are taken as zero
    let norm = if n < 2 { 0.0 } else { 1.0 / (n * (n - 1)) as f64 };
    // raise all three indices one at a time
    let mut up = a_low.clone();
    for axis in 0..3 {
        let src = up.clone();
        up = Array3::from_shape_fn((n, n, n), |idx| {
            let mut acc = 0.0;
            for p in 0..n {
                let mut s = [idx.0, idx.1, idx.2];
                let free = s[axis];
                s[axis] = p;
                acc += g_inv[[free, p]] * src[[s[0], s[1], s[2]]];
            }
            acc
        });
    }
    let j = norm * (a_low * &up).sum();
    let mut chi = 0.0;
    for i in 0..n {
        for j2 in 0..n {
            for k in 0..n {
                for l in 0..n {
                    chi += g_inv[[i, l]] * g_inv[[j2, k]] * r_low[[i, j2, k, l]];
                }
            }
        }
    }
    (j, norm * chi)
}

/// `g = H^{-1/(n+2)} h`.
pub fn blaschke_metric(h: &Array2<f64>, det_h: f64) -> Array2<f64> {
    let n = h.nrows() as f64;
    h * det_h.abs().powf(-1.0 / (n + 2.0))
}

/// `(h, H)` at `u`, with `h` normalized to be positive definite.
pub fn fundamental_form(chart: &dyn Chart, u: &[f64], backend: &DerivBackend) -> Result<(Array2<f64>, f64)> {
    let inv = compute_invariants(chart, u, backend)?;
    Ok((inv.h, inv.det_h))
}

/// Affine normal `ξ(u)`.
pub fn affine_normal(chart: &dyn Chart, u: &[f64], backend: &DerivBackend) -> Result<Array1<f64>> {
    Ok(compute_invariants(chart, u, backend)?.xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_arithmetic() {
        let h = Array2::from_diag(&Array1::from_vec(vec![4.0, 4.0]));
        let g = blaschke_metric(&h, 16.0);
        assert!((g[[0, 0]] - 2.0).abs() < 1e-15 && g[[0, 1]] == 0.0);
    }

    #[test]
    fn cholesky_test() {
        let m = Array2::from_shape_vec((2, 2), vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        assert!(positive_definite(&m));
        let m = Array2::from_shape_vec((2, 2), vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(!positive_definite(&m));
    }
}
