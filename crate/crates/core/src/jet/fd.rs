//! Finite-difference fallback for the jet layer.
//!
//! Mixed partials up to order four are recovered from central directional
//! derivatives by polarization:
//!
//! ```text
//! ∂_{i1} ... ∂_{ik} f = 1/k! Σ_{∅≠T⊆{1..k}} (−1)^{k−|T|} D^k_{d_T} f,   d_T = Σ_{t∈T} e_{it}
//! ```
//!
//! Each `D^k_d` is a second-order central stencil along `d`; with Richardson
//! enabled the steps `h` and `h/2` are combined to cancel the `h²` error term.
//! All stencil points lie on an integer lattice around the base point, so
//! every chart evaluation is shared between the partials that need it.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{Jet, JetContext, MultiIndex, MAX_DEGREE};
use crate::error::{Error, Result};

/// How chart derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivMode {
    Jets,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivBackend {
    pub mode: DerivMode,
    /// Base step, scaled per coordinate by `max(1, |u_i|)`.
    pub fd_step: f64,
    pub fd_richardson: bool,
}

impl Default for DerivBackend {
    fn default() -> Self {
        Self::jets()
    }
}

impl DerivBackend {
    pub fn jets() -> Self {
        DerivBackend {
            mode: DerivMode::Jets,
            fd_step: 1e-2,
            fd_richardson: true,
        }
    }

    pub fn finite_difference() -> Self {
        DerivBackend {
            mode: DerivMode::FiniteDifference,
            ..Self::jets()
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.fd_step = step;
        self
    }
}

/// Stencil weights `(offset, weight)` of the order-`k` central difference at unit step.
fn stencil(k: usize) -> &'static [(i8, f64)] {
    match k {
        1 => &[(1, 0.5), (-1, -0.5)],
        2 => &[(1, 1.0), (0, -2.0), (-1, 1.0)],
        3 => &[(2, 0.5), (1, -1.0), (-1, 1.0), (-2, -0.5)],
        4 => &[(2, 1.0), (1, -4.0), (0, 6.0), (-1, -4.0), (-2, 1.0)],
        _ => unreachable!("stencil order {k}"),
    }
}

struct Plan {
    /// Distinct integer directions.
    dirs: Vec<Vec<i8>>,
    /// Per requested multi-index: order and `(direction, polarization weight)` terms.
    terms: Vec<(usize, Vec<(usize, f64)>)>,
}

fn plan(n: usize, mis: &[MultiIndex]) -> Plan {
    let mut dir_ids: HashMap<Vec<i8>, usize> = HashMap::new();
    let mut dirs = Vec::new();
    let mut terms = Vec::with_capacity(mis.len());
    for mi in mis {
        let vars = mi.vars();
        let k = vars.len();
        let mut acc: HashMap<usize, f64> = HashMap::new();
        if k > 0 {
            let kfact: f64 = (1..=k).map(|i| i as f64).product();
            for mask in 1u32..(1u32 << k) {
                let mut d = vec![0i8; n];
                for (t, &v) in vars.iter().enumerate() {
                    if mask & (1 << t) != 0 {
                        d[v] += 1;
                    }
                }
                let sign = if (k - mask.count_ones() as usize).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                let id = *dir_ids.entry(d.clone()).or_insert_with(|| {
                    dirs.push(d);
                    dirs.len() - 1
                });
                *acc.entry(id).or_insert(0.0) += sign / kfact;
            }
        }
        let mut list: Vec<(usize, f64)> = acc.into_iter().filter(|(_, w)| *w != 0.0).collect();
        list.sort_by_key(|(id, _)| *id);
        terms.push((k, list));
    }
    Plan { dirs, terms }
}

/// Mixed partials `∂^mi f(u)` for each requested multi-index and each output
/// component of a vector-valued `f`.
pub fn fd_partials<F>(f: &F, u: &[f64], mis: &[MultiIndex], cfg: &DerivBackend) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync + ?Sized,
{
    let n = u.len();
    for mi in mis {
        if mi.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "multi-index of length {} at a point of dimension {n}",
                mi.len()
            )));
        }
        if mi.degree() > MAX_DEGREE {
            return Err(Error::DegreeOverflow {
                degree: mi.degree(),
                max_degree: MAX_DEGREE,
            });
        }
    }
    if !(cfg.fd_step > 0.0) {
        return Err(Error::ShapeMismatch("finite-difference step must be positive".into()));
    }
    let scale: Vec<f64> = u.iter().map(|x| x.abs().max(1.0)).collect();
    let plan = plan(n, mis);
    let levels: &[f64] = if cfg.fd_richardson {
        &[cfg.fd_step, cfg.fd_step / 2.0]
    } else {
        &[cfg.fd_step]
    };

    // orders needed per direction
    let mut orders = vec![0u8; plan.dirs.len()];
    for (k, list) in &plan.terms {
        for &(id, _) in list {
            orders[id] |= 1 << k;
        }
    }

    // lattice points: (level, integer offset)
    let mut points: HashMap<(usize, Vec<i8>), usize> = HashMap::new();
    let mut point_list: Vec<(usize, Vec<i8>)> = Vec::new();
    let mut intern = |key: (usize, Vec<i8>)| -> usize {
        *points.entry(key.clone()).or_insert_with(|| {
            point_list.push(key);
            point_list.len() - 1
        })
    };
    let center = intern((0, vec![0; n]));
    let mut stencil_points: Vec<Vec<Vec<Vec<(usize, f64)>>>> = Vec::with_capacity(plan.dirs.len());
    for (id, d) in plan.dirs.iter().enumerate() {
        let mut per_level = Vec::with_capacity(levels.len());
        for level in 0..levels.len() {
            let mut per_order = vec![Vec::new(); MAX_DEGREE + 1];
            for (k, slot) in per_order.iter_mut().enumerate().skip(1) {
                if orders[id] & (1 << k) == 0 {
                    continue;
                }
                for &(s, w) in stencil(k) {
                    let p = if s == 0 {
                        center
                    } else {
                        intern((level, d.iter().map(|&x| x * s).collect()))
                    };
                    slot.push((p, w));
                }
            }
            per_level.push(per_order);
        }
        stencil_points.push(per_level);
    }

    let values: Vec<Vec<f64>> = point_list
        .par_iter()
        .map(|(level, offset)| {
            let h = levels[*level];
            let x: Vec<f64> = u
                .iter()
                .zip(offset)
                .zip(&scale)
                .map(|((&ui, &o), &s)| ui + h * s * o as f64)
                .collect();
            f(&x)
        })
        .collect();
    let m = values[center].len();

    let directional = |id: usize, k: usize| -> Vec<f64> {
        let mut per_level: Vec<Vec<f64>> = Vec::with_capacity(levels.len());
        for (level, &h) in levels.iter().enumerate() {
            let mut acc = vec![0.0; m];
            for &(p, w) in &stencil_points[id][level][k] {
                for (a, v) in acc.iter_mut().zip(&values[p]) {
                    *a += w * v;
                }
            }
            let hk = h.powi(k as i32);
            acc.iter_mut().for_each(|a| *a /= hk);
            per_level.push(acc);
        }
        if per_level.len() == 2 {
            per_level[0]
                .iter()
                .zip(&per_level[1])
                .map(|(coarse, fine)| (4.0 * fine - coarse) / 3.0)
                .collect()
        } else {
            per_level.pop().unwrap()
        }
    };

    let out = mis
        .iter()
        .zip(&plan.terms)
        .map(|(mi, (k, list))| {
            if *k == 0 {
                return values[center].clone();
            }
            let mut acc = vec![0.0; m];
            for &(id, w) in list {
                for (a, v) in acc.iter_mut().zip(directional(id, *k)) {
                    *a += w * v;
                }
            }
            // back from scaled coordinates z = (u − u0)/λ
            let lam: f64 = mi
                .0
                .iter()
                .zip(&scale)
                .map(|(&e, &s)| s.powi(e as i32))
                .product();
            acc.iter_mut().for_each(|a| *a /= lam);
            acc
        })
        .collect();
    Ok(out)
}

/// Mixed partial `∂^mi f(u)` of a scalar function.
pub fn fd_partial<F>(f: &F, u: &[f64], mi: &MultiIndex, cfg: &DerivBackend) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    let g = |x: &[f64]| vec![f(x)];
    Ok(fd_partials(&g, u, std::slice::from_ref(mi), cfg)?[0][0])
}

/// Degree-`max_degree` Taylor jets of every component of `f` at `u`, with all
/// coefficients estimated by finite differences.
pub fn fd_taylor<F>(f: &F, u: &[f64], max_degree: usize, cfg: &DerivBackend) -> Result<Vec<Jet<f64>>>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync + ?Sized,
{
    let ctx = JetContext::get(u.len(), max_degree)?;
    let partials = fd_partials(f, u, ctx.indices(), cfg)?;
    let m = partials[0].len();
    (0..m)
        .map(|c| {
            let coeffs = ctx
                .indices()
                .iter()
                .zip(&partials)
                .map(|(mi, p)| p[c] / mi.factorial())
                .collect();
            Jet::from_coeffs(&ctx, coeffs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_mixed_fourth() {
        let f = |x: &[f64]| x[0] * x[1] * x[2] * x[3];
        let cfg = DerivBackend::finite_difference();
        let v = fd_partial(&f, &[0.3, -0.2, 0.5, 1.5], &MultiIndex(vec![1, 1, 1, 1]), &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn exp_fourth_derivative() {
        let f = |x: &[f64]| x[0].exp();
        let cfg = DerivBackend::finite_difference();
        let v = fd_partial(&f, &[0.0], &MultiIndex(vec![4]), &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-4, "{v}");
    }

    #[test]
    fn richardson_improves_accuracy() {
        let f = |x: &[f64]| (x[0] * 1.3).sin() * (x[1] * 0.7).exp();
        let exact = -1.3f64.powi(2) * 0.7 * (0.2f64 * 1.3).sin() * (0.1f64 * 0.7).exp();
        let mi = MultiIndex(vec![2, 1]);
        let plain = DerivBackend {
            fd_richardson: false,
            ..DerivBackend::finite_difference()
        };
        let a = fd_partial(&f, &[0.2, 0.1], &mi, &plain).unwrap();
        let b = fd_partial(&f, &[0.2, 0.1], &mi, &DerivBackend::finite_difference()).unwrap();
        assert!((b - exact).abs() < (a - exact).abs());
        assert!((b - exact).abs() < 1e-7);
    }

    #[test]
    fn taylor_matches_polynomial() {
        // f = 1 + 2u + u v² − 3 v⁴ ; exact Taylor at (0,0)
        let f = |x: &[f64]| vec![1.0 + 2.0 * x[0] + x[0] * x[1] * x[1] - 3.0 * x[1].powi(4)];
        let jets = fd_taylor(&f, &[0.0, 0.0], 4, &DerivBackend::finite_difference()).unwrap();
        let j = &jets[0];
        let want = [
            (vec![0u8, 0u8], 1.0),
            (vec![1, 0], 2.0),
            (vec![1, 2], 1.0),
            (vec![0, 4], -3.0),
        ];
        for (mi, c) in j.context().indices().iter().zip(j.coeffs()) {
            let w = want
                .iter()
                .find(|(e, _)| *e == mi.0)
                .map(|(_, v)| *v)
                .unwrap_or(0.0);
            assert!((c - w).abs() < 1e-7, "{mi}: {c} vs {w}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let f = |x: &[f64]| x[0];
        let cfg = DerivBackend::finite_difference();
        assert!(fd_partial(&f, &[0.0], &MultiIndex(vec![5]), &cfg).is_err());
        assert!(fd_partial(&f, &[0.0], &MultiIndex(vec![1]), &cfg.with_step(0.0)).is_err());
    }
}
