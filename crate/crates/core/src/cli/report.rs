use serde::Serialize;

use crate::blaschke::{PointInvariants, ResidualReport};
use crate::calabi::FactorCheck;
use crate::models::Expectations;

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: &str = "equiaffine-report/1";

/// One named pass/fail comparison `value < threshold`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn below(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.to_string(),
            value,
            threshold,
            // NaN fails
            pass: value < threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub model: String,
    pub point: usize,
    pub u: Vec<f64>,
    pub l1: Option<f64>,
    pub j: Option<f64>,
    pub chi: Option<f64>,
    pub residuals: Option<ResidualReport>,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub pass: bool,
}

impl PointRecord {
    pub fn failed(model: &str, point: usize, u: Vec<f64>, error: String) -> Self {
        PointRecord {
            model: model.to_string(),
            point,
            u,
            l1: None,
            j: None,
            chi: None,
            residuals: None,
            checks: vec![],
            error: Some(error),
            pass: false,
        }
    }

    /// Structure-equation checks plus those implied by `expect`.
    pub fn from_invariants(
        model: &str,
        point: usize,
        inv: &PointInvariants,
        res: ResidualReport,
        expect: &Expectations,
        tol: f64,
    ) -> Self {
        let mut checks = vec![
            Check::below("apolarity", res.apolarity, tol),
            Check::below("codazzi", res.codazzi, tol),
            Check::below("contracted_codazzi", res.contracted_codazzi, tol),
            Check::below("gauss", res.gauss, tol),
            Check::below("gauss_structure", res.gauss_structure, tol),
            Check::below("symmetry_a", res.symmetry_a, tol),
            Check::below("weingarten_normal_component", res.weingarten_normal_component, tol),
            Check::below("frame", res.frame, tol),
            Check::below("pick_route", res.pick_route, tol),
        ];
        if expect.hypersphere {
            checks.push(Check::below("hypersphere", res.hypersphere, tol));
        }
        if let Some(l1) = expect.l1 {
            checks.push(Check::below("l1", (inv.l1 - l1).abs(), tol));
        }
        if expect.centered {
            checks.push(Check::below("center", center_residual(inv), tol));
        }
        if expect.parallel {
            checks.push(Check::below("parallel_a", res.parallel_a, tol));
        }
        if expect.quadric {
            checks.push(Check::below("cubic_form", max_abs(inv.a_low.iter()), tol));
        }
        if expect.flat {
            checks.push(Check::below("curvature", max_abs(inv.r_low.iter()), tol));
        }
        let pass = checks.iter().all(|c| c.pass);
        PointRecord {
            model: model.to_string(),
            point,
            u: inv.u.clone(),
            l1: Some(inv.l1),
            j: Some(inv.j),
            chi: Some(inv.chi),
            residuals: Some(res),
            checks,
            error: None,
            pass,
        }
    }
}

fn max_abs<'a>(it: impl Iterator<Item = &'a f64>) -> f64 {
    it.fold(0.0, |m, v| m.max(v.abs()))
}

/// `max |ξ + L₁x|`
pub fn center_residual(inv: &PointInvariants) -> f64 {
    max_abs((&inv.xi + &(&inv.x * inv.l1)).iter())
}

/// Composition-level data in a `calabi` report.
#[derive(Debug, Clone, Serialize)]
pub struct CalabiSection {
    pub r: usize,
    pub s: usize,
    pub factors: Vec<String>,
    pub c: Vec<f64>,
    pub n: usize,
    pub f: Vec<f64>,
    pub predicted_l1: f64,
    pub predicted_c: f64,
    pub factor_checks: Vec<FactorCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Full output of one run. Contains no timing so equal configurations give equal bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub backend: String,
    pub tolerance: f64,
    pub points: usize,
    pub seed: u64,
    pub calabi: Option<CalabiSection>,
    pub records: Vec<PointRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(
        command: &'static str,
        backend: String,
        tolerance: f64,
        points: usize,
        seed: u64,
        calabi: Option<CalabiSection>,
        records: Vec<PointRecord>,
    ) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        Report {
            schema: SCHEMA_VERSION,
            command,
            backend,
            tolerance,
            points,
            seed,
            calabi,
            summary: Summary {
                records: records.len(),
                passed,
                failed: records.len() - passed,
            },
            records,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0 && !self.records.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
