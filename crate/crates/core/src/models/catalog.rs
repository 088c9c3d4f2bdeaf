use std::sync::Arc;

use serde::Serialize;

use super::{flat_chart, perturbed_paraboloid, quadric_chart, Family, MatrixModel, QuadricKind};
use crate::blaschke::Chart;
use crate::calabi::CalabiSpec;
use crate::error::{Error, Result};
use crate::jordan::E6Model;

/// What a resolved model is expected to satisfy beyond the structure equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectations {
    /// `B = L₁g`
    pub hypersphere: bool,
    /// Affine mean curvature, when known in closed form.
    pub l1: Option<f64>,
    /// Affine normal `ξ = −L₁x`, i.e. center at the origin.
    pub centered: bool,
    /// `∇A = 0`
    pub parallel: bool,
    /// `A = 0`
    pub quadric: bool,
    /// `R = 0`
    pub flat: bool,
}

impl Expectations {
    fn none() -> Self {
        Expectations {
            hypersphere: false,
            l1: None,
            centered: false,
            parallel: false,
            quadric: false,
            flat: false,
        }
    }
}

/// A chart resolved from its label.
#[derive(Clone)]
pub struct ResolvedModel {
    pub label: String,
    pub family: &'static str,
    pub chart: Arc<dyn Chart>,
    pub expect: Expectations,
}

impl std::fmt::Debug for ResolvedModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResolvedModel")
            .field("label", &self.label)
            .field("family", &self.family)
            .field("expect", &self.expect)
            .finish()
    }
}

/// One line of the catalog listing.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub label: String,
    pub n: usize,
    pub family: &'static str,
    pub defaults: &'static str,
    pub backend: &'static str,
}

const CATALOG_LABELS: &[&str] = &[
    "quadric:ellipsoid:2",
    "quadric:ellipsoid:3",
    "quadric:paraboloid:2",
    "quadric:paraboloid:3",
    "quadric:hyperboloid:2",
    "quadric:hyperboloid:3",
    "flat:2",
    "flat:3",
    "flat:4",
    "slr:3",
    "slr:4",
    "slc:3",
    "suh:3",
    "e6f4",
    "perturbed:3",
];

/// Default magnitude of the cubic term in `perturbed:n`.
pub const PERTURBATION: f64 = 0.1;

/// Built-in models in a fixed order. Parametric families accept other sizes too.
pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG_LABELS
        .iter()
        .map(|label| {
            let m = resolve(label).expect("catalog labels resolve");
            let defaults = match m.family {
                "quadric" => "radius 1",
                "flat" => "C = 1",
                "perturbed" => "eps = 0.1",
                _ => "L1 = -1",
            };
            CatalogEntry {
                label: m.label,
                n: m.chart.dim(),
                family: m.family,
                defaults,
                backend: if m.chart.jet_capable() { "jets" } else { "fd" },
            }
        })
        .collect()
}

fn parse_size(label: &str, s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::UnknownLabel(label.to_string()))
}

/// Resolves `quadric:{ellipsoid,paraboloid,hyperboloid}:n`, `flat:n`,
/// `slr:m`, `slc:m`, `suh:m`, `e6f4` and `perturbed:n`.
pub fn resolve(label: &str) -> Result<ResolvedModel> {
    let parts: Vec<&str> = label.split(':').collect();
    let unknown = || Error::UnknownLabel(label.to_string());
    let base = Expectations::none();
    let (family, chart, expect): (&'static str, Arc<dyn Chart>, Expectations) = match parts.as_slice() {
        ["quadric", kind, n] => {
            let n = parse_size(label, n)?;
            let (kind, l1) = match *kind {
                "ellipsoid" => (QuadricKind::Ellipsoid(1.0), 1.0),
                "paraboloid" => (QuadricKind::Paraboloid, 0.0),
                "hyperboloid" => (QuadricKind::Hyperboloid(1.0), -1.0),
                _ => return Err(unknown()),
            };
            let expect = Expectations {
                hypersphere: true,
                l1: Some(l1),
                centered: l1 != 0.0,
                parallel: true,
                quadric: true,
                ..base
            };
            ("quadric", Arc::new(quadric_chart(kind, n)?), expect)
        }
        ["flat", n] => {
            let n = parse_size(label, n)?;
            let chart = flat_chart(n, 1.0)?;
            let (l1, _) = CalabiSpec::new(n + 1, vec![], vec![1.0; n + 1])?.predicted_l1();
            let expect = Expectations {
                hypersphere: true,
                l1: Some(l1),
                centered: true,
                parallel: true,
                flat: true,
                ..base
            };
            ("flat", Arc::new(chart), expect)
        }
        [tag @ ("slr" | "slc" | "suh"), m] => {
            let m = parse_size(label, m)?;
            let family = match *tag {
                "slr" => Family::Slr,
                "slc" => Family::Slc,
                _ => Family::SuStar,
            };
            let model = MatrixModel::new(family, m, -1.0)?;
            let expect = Expectations {
                hypersphere: true,
                l1: Some(-1.0),
                centered: true,
                parallel: true,
                ..base
            };
            (family.tag(), model.into_chart(), expect)
        }
        ["e6f4"] => {
            let expect = Expectations {
                hypersphere: true,
                l1: Some(-1.0),
                centered: true,
                parallel: true,
                ..base
            };
            ("e6f4", Arc::new(E6Model::new(-1.0)?.chart()), expect)
        }
        ["perturbed", n] => {
            let n = parse_size(label, n)?;
            ("perturbed", Arc::new(perturbed_paraboloid(n, PERTURBATION)?), base)
        }
        _ => return Err(unknown()),
    };
    Ok(ResolvedModel {
        label: label.to_string(),
        family,
        chart,
        expect,
    })
}

/// Resolves a label to a Calabi factor, which must be a centered hyperbolic hypersphere.
pub fn resolve_factor(label: &str) -> Result<(Arc<dyn Chart>, f64)> {
    let m = resolve(label)?;
    match m.expect.l1 {
        Some(l1) if m.expect.centered && l1 < 0.0 => Ok((m.chart, l1)),
        _ => Err(Error::InvalidSpec(format!(
            "`{label}` is not a centered hyperbolic affine hypersphere"
        ))),
    }
}
