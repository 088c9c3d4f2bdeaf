use ndarray::{Array2, Array4};
use serde::{Deserialize, Serialize};

use super::pipeline::{raise_last, PointInvariants};

/// Max-abs residual of each structure equation at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `Σ gⁱʲ A_{ijk}`
    pub apolarity: f64,
    /// Codazzi equation for `∇A` and `B`.
    pub codazzi: f64,
    /// `Σₗ Aˡ_{ij,l} = (n/2)(L₁g_{ij} − B_{ij})`
    pub contracted_codazzi: f64,
    /// Curvature in terms of `g`, `A`, `∇A`, `χ` and `J` only.
    pub gauss: f64,
    /// Curvature in terms of `g`, `B` and `[A(X), A(Y)]`.
    pub gauss_structure: f64,
    /// `B − L₁g`
    pub hypersphere: f64,
    /// Deviation of `A_{ijk}` from total symmetry.
    pub symmetry_a: f64,
    /// `max |A_{ijk,l}|`
    pub parallel_a: f64,
    /// Normal component of `∂ᵢξ`.
    pub weingarten_normal_component: f64,
    /// `ξ`-component of the frame solve against `g`.
    pub frame: f64,
    /// Cubic form from the frame solve against the one from `∇h`.
    pub pick_route: f64,
}

impl ResidualReport {
    /// Residuals that vanish on every nondegenerate hypersurface.
    pub fn structural_max(&self) -> f64 {
        [
            self.apolarity,
            self.codazzi,
            self.contracted_codazzi,
            self.gauss,
            self.gauss_structure,
            self.symmetry_a,
            self.weingarten_normal_component,
            self.frame,
            self.pick_route,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Structural residuals plus the two that single out affine symmetric hyperspheres.
    pub fn symmetric_hypersphere_max(&self) -> f64 {
        self.structural_max().max(self.hypersphere).max(self.parallel_a)
    }

    pub fn max_with(&self, other: &Self) -> Self {
        ResidualReport {
            apolarity: self.apolarity.max(other.apolarity),
            codazzi: self.codazzi.max(other.codazzi),
            contracted_codazzi: self.contracted_codazzi.max(other.contracted_codazzi),
            gauss: self.gauss.max(other.gauss),
            gauss_structure: self.gauss_structure.max(other.gauss_structure),
            hypersphere: self.hypersphere.max(other.hypersphere),
            symmetry_a: self.symmetry_a.max(other.symmetry_a),
            parallel_a: self.parallel_a.max(other.parallel_a),
            weingarten_normal_component: self.weingarten_normal_component.max(other.weingarten_normal_component),
            frame: self.frame.max(other.frame),
            pick_route: self.pick_route.max(other.pick_route),
        }
    }
}

fn max_abs<'a>(it: impl IntoIterator<Item = &'a f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Codazzi right-hand side `½(g_{jk}B_{il} − g_{jl}B_{ik} − g_{il}B_{jk} + g_{ik}B_{jl})`.
fn codazzi_rhs(g: &Array2<f64>, b: &Array2<f64>, i: usize, j: usize, k: usize, l: usize) -> f64 {
    0.5 * (g[[j, k]] * b[[i, l]] - g[[j, l]] * b[[i, k]] - g[[i, l]] * b[[j, k]] + g[[i, k]] * b[[j, l]])
}

pub fn residual_report(inv: &PointInvariants) -> ResidualReport {
    let n = inv.g.nrows();
    let nf = n as f64;
    let g = &inv.g;
    let gi = &inv.g_inv;
    let a = &inv.a_low;
    let am = &inv.a_mixed;
    let b = &inv.b_low;
    let na = &inv.nabla_a;

    let mut apolarity = 0.0f64;
    for k in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += gi[[i, j]] * a[[i, j, k]];
            }
        }
        apolarity = apolarity.max(s.abs());
    }

    let mut symmetry_a = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = a[[i, j, k]];
                for w in [a[[i, k, j]], a[[j, i, k]], a[[j, k, i]], a[[k, i, j]], a[[k, j, i]]] {
                    symmetry_a = symmetry_a.max((v - w).abs());
                }
            }
        }
    }

    let mut codazzi = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let lhs = na[[i, j, k, l]] - na[[i, j, l, k]];
                    codazzi = codazzi.max((lhs - codazzi_rhs(g, b, i, j, k, l)).abs());
                }
            }
        }
    }

    // div[[i, j]] = Σ_{m,p} gᵐᵖ A_{ijm,p}
    let div = Array2::from_shape_fn((n, n), |(i, j)| {
        let mut s = 0.0;
        for m in 0..n {
            for p in 0..n {
                s += gi[[m, p]] * na[[i, j, m, p]];
            }
        }
        s
    });
    let mut contracted_codazzi = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let rhs = 0.5 * nf * (inv.l1 * g[[i, j]] - b[[i, j]]);
            contracted_codazzi = contracted_codazzi.max((div[[i, j]] - rhs).abs());
        }
    }

    let r = &inv.r_low;
    let gauss_rhs = Array4::from_shape_fn((n, n, n, n), |(i, j, k, l)| {
        let mut v = na[[i, j, k, l]] - na[[i, j, l, k]]
            + (inv.chi - inv.j) * (g[[i, l]] * g[[j, k]] - g[[i, k]] * g[[j, l]])
            + 2.0 / nf * (g[[i, k]] * div[[j, l]] - g[[i, l]] * div[[j, k]]);
        for m in 0..n {
            v += am[[i, k, m]] * a[[j, l, m]] - am[[i, l, m]] * a[[j, k, m]];
        }
        v
    });
    let gauss = max_abs((r - &gauss_rhs).iter());

    let structure_rhs = Array4::from_shape_fn((n, n, n, n), |(i, j, k, l)| {
        let mut v = 0.5 * (g[[j, k]] * b[[i, l]] + b[[j, k]] * g[[i, l]] - g[[i, k]] * b[[j, l]] - b[[i, k]] * g[[j, l]]);
        for p in 0..n {
            v -= am[[j, k, p]] * a[[i, p, l]] - am[[i, k, p]] * a[[j, p, l]];
        }
        v
    });
    let gauss_structure = max_abs((r - &structure_rhs).iter());

    let hypersphere = max_abs((b - &(g * inv.l1)).iter());
    let parallel_a = max_abs(na.iter());
    let weingarten_normal_component = max_abs(inv.weingarten_normal.iter());
    let pick_route = max_abs((a - &inv.a_from_h).iter());

    ResidualReport {
        apolarity,
        codazzi,
        contracted_codazzi,
        gauss,
        gauss_structure,
        hypersphere,
        symmetry_a,
        parallel_a,
        weingarten_normal_component,
        frame: inv.frame_residual,
        pick_route,
    }
}

/// Residual of `R(X,Y)Z = L₁(g(Y,Z)X − g(X,Z)Y) − [A(X), A(Y)]Z`, the Gauss
/// equation of an affine hypersphere.
pub fn hypersphere_gauss_residual(inv: &PointInvariants) -> f64 {
    let n = inv.g.nrows();
    let g = &inv.g;
    let a = &inv.a_low;
    let am = raise_last(&inv.g_inv, a);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = inv.l1 * (g[[j, k]] * g[[i, l]] - g[[i, k]] * g[[j, l]]);
                    for p in 0..n {
                        v -= am[[j, k, p]] * a[[i, p, l]] - am[[i, k, p]] * a[[j, p, l]];
                    }
                    worst = worst.max((inv.r_low[[i, j, k, l]] - v).abs());
                }
            }
        }
    }
    worst
}
