//! Verification runs behind the `equiaffine` binary: `verify`, `calabi` and `list`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage,
//! label or spec errors.

mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

pub use report::{center_residual, CalabiSection, Check, PointRecord, Report, Summary, SCHEMA_VERSION};

use crate::blaschke::{compute_invariants, residual_report, Chart};
use crate::calabi::{CalabiSpec, FactorSpec};
use crate::error::{Error, Result};
use crate::jet::DerivBackend;
use crate::models::{catalog, resolve, resolve_factor, Expectations};

/// Charts above this dimension without jet support only run with `--long`.
pub const LONG_RUN_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    /// Jets when the chart supports them, otherwise finite differences.
    Auto,
    Jets,
    Fd,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunOptions {
    #[arg(long, value_enum, default_value = "auto")]
    pub backend: BackendChoice,
    /// Residual threshold; defaults to 1e-6 for jets and 1e-3 for finite differences.
    #[arg(long = "tol")]
    pub tolerance: Option<f64>,
    /// Sample points per model.
    #[arg(long, default_value_t = 3)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allow the 26-dimensional finite-difference runs.
    #[arg(long = "long")]
    pub long_running: bool,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long = "out")]
    pub output_path: Option<PathBuf>,
    /// Require `B = L₁g` and `∇A = 0` on every model, whatever its catalog entry says.
    #[arg(long)]
    pub symmetric: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            backend: BackendChoice::Auto,
            tolerance: None,
            points: 3,
            seed: 0,
            long_running: false,
            workers: None,
            output_path: None,
            symmetric: false,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "equiaffine", version, about = "Equiaffine invariants of hypersurfaces and their verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the structure equations and model-specific identities on labeled models.
    Verify {
        /// Catalog labels, see `list`
        #[arg(required = true)]
        labels: Vec<String>,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Build a Calabi composition from a TOML spec and audit it.
    Calabi {
        /// TOML file with `r`, `s`, `factors` and `c`
        spec: PathBuf,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Print the model catalog.
    List,
}

/// Composition spec file: `r`, `s`, `factors` (labels) and `c` (positive reals).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalabiDocument {
    pub r: usize,
    pub s: usize,
    #[serde(default)]
    pub factors: Vec<String>,
    pub c: Vec<f64>,
}

impl CalabiDocument {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidSpec(e.message().to_string()))
    }
}

fn backend_for(choice: BackendChoice, chart: &dyn Chart) -> Result<DerivBackend> {
    match choice {
        BackendChoice::Fd => Ok(DerivBackend::finite_difference()),
        BackendChoice::Jets if !chart.jet_capable() => Err(Error::UnsupportedBackend(chart.label())),
        BackendChoice::Jets => Ok(DerivBackend::jets()),
        BackendChoice::Auto if chart.jet_capable() => Ok(DerivBackend::jets()),
        BackendChoice::Auto => Ok(DerivBackend::finite_difference()),
    }
}

fn backend_name(b: &DerivBackend) -> &'static str {
    if b.mode == crate::jet::DerivMode::Jets {
        "jets"
    } else {
        "fd"
    }
}

fn default_tolerance(b: &DerivBackend) -> f64 {
    if backend_name(b) == "jets" {
        1e-6
    } else {
        1e-3
    }
}

fn validate_opts(opts: &RunOptions) -> Result<()> {
    if opts.points == 0 {
        return Err(Error::InvalidSpec("--points must be at least 1".into()));
    }
    if let Some(t) = opts.tolerance {
        if !(t > 0.0) {
            return Err(Error::InvalidSpec(format!("--tol must be positive, got {t}")));
        }
    }
    Ok(())
}

/// `count` points uniform in the chart's domain box, from stream `stream` of the seed.
pub fn sample_points(chart: &dyn Chart, count: usize, seed: u64, stream: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let domain = chart.domain();
    (0..count)
        .map(|_| domain.iter().map(|&(a, b)| rng.random_range(a..=b)).collect())
        .collect()
}

struct Task<'a> {
    label: &'a str,
    chart: &'a dyn Chart,
    expect: &'a Expectations,
    backend: DerivBackend,
    tol: f64,
    point: usize,
    u: Vec<f64>,
}

fn run_tasks(tasks: Vec<Task<'_>>, workers: Option<usize>) -> Result<Vec<PointRecord>> {
    let work = || {
        tasks
            .par_iter()
            .map(|t| match compute_invariants(t.chart, &t.u, &t.backend) {
                Ok(inv) => {
                    let res = residual_report(&inv);
                    PointRecord::from_invariants(t.label, t.point, &inv, res, t.expect, t.tol)
                }
                Err(e) => PointRecord::failed(t.label, t.point, t.u.clone(), e.to_string()),
            })
            .collect()
    };
    match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidSpec(e.to_string()))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

fn describe_backends(names: &[&'static str]) -> String {
    let mut v: Vec<&str> = names.to_vec();
    v.sort();
    v.dedup();
    v.join(",")
}

/// Runs the pipeline on every label at `opts.points` seeded points.
pub fn verify(labels: &[String], opts: &RunOptions) -> Result<Report> {
    validate_opts(opts)?;
    let mut models = labels.iter().map(|l| resolve(l)).collect::<Result<Vec<_>>>()?;
    if opts.symmetric {
        for m in &mut models {
            m.expect.hypersphere = true;
            m.expect.parallel = true;
        }
    }
    let mut plans = Vec::with_capacity(models.len());
    for m in &models {
        let backend = backend_for(opts.backend, m.chart.as_ref())?;
        if !opts.long_running && !m.chart.jet_capable() && m.chart.dim() > LONG_RUN_DIM {
            return Err(Error::InvalidSpec(format!(
                "`{}` runs a {}-dimensional finite-difference pipeline; pass --long",
                m.label,
                m.chart.dim()
            )));
        }
        plans.push((backend, opts.tolerance.unwrap_or_else(|| default_tolerance(&backend))));
    }
    let mut tasks = Vec::new();
    for (idx, (m, (backend, tol))) in models.iter().zip(&plans).enumerate() {
        for (point, u) in sample_points(m.chart.as_ref(), opts.points, opts.seed, idx as u64).into_iter().enumerate() {
            tasks.push(Task {
                label: &m.label,
                chart: m.chart.as_ref(),
                expect: &m.expect,
                backend: *backend,
                tol: *tol,
                point,
                u,
            });
        }
    }
    let records = run_tasks(tasks, opts.workers)?;
    let names: Vec<&'static str> = plans.iter().map(|(b, _)| backend_name(b)).collect();
    let tol = plans.iter().map(|(_, t)| *t).fold(0.0, f64::max);
    Ok(Report::new("verify", describe_backends(&names), tol, opts.points, opts.seed, None, records))
}

/// Builds the composition described by `doc`, validating each factor through the pipeline.
pub fn build_calabi(doc: &CalabiDocument, opts: &RunOptions) -> Result<(CalabiSpec, Vec<crate::calabi::FactorCheck>, bool)> {
    if doc.factors.len() != doc.s {
        return Err(Error::InvalidSpec(format!("s = {} but {} factor labels given", doc.s, doc.factors.len())));
    }
    let mut factors = Vec::new();
    let mut checks = Vec::new();
    let mut symmetric = true;
    for label in &doc.factors {
        let (chart, l1) = resolve_factor(label)?;
        symmetric &= resolve(label)?.expect.parallel;
        let backend = backend_for(opts.backend, chart.as_ref())?;
        let tol = opts.tolerance.unwrap_or_else(|| default_tolerance(&backend));
        let f = FactorSpec::new(chart, l1)?;
        checks.push(f.validate(&backend, tol)?);
        factors.push(f);
    }
    Ok((CalabiSpec::new(doc.r, factors, doc.c.clone())?, checks, symmetric))
}

/// Audits a Calabi composition: structure equations, `B = L₁g`, the closed-form `L₁`,
/// the affine center and, for symmetric factors, `∇A = 0`.
pub fn calabi(doc: &CalabiDocument, opts: &RunOptions) -> Result<Report> {
    validate_opts(opts)?;
    let (spec, factor_checks, symmetric) = build_calabi(doc, opts)?;
    let chart = spec.build_composition();
    let backend = backend_for(opts.backend, &chart)?;
    let tol = opts.tolerance.unwrap_or_else(|| default_tolerance(&backend));
    let (predicted_l1, predicted_c) = spec.predicted_l1();
    let expect = Expectations {
        hypersphere: true,
        l1: Some(predicted_l1),
        centered: true,
        parallel: symmetric,
        quadric: false,
        flat: spec.s() == 0,
    };
    let label = spec.label();
    let tasks = sample_points(&chart, opts.points, opts.seed, 0)
        .into_iter()
        .enumerate()
        .map(|(point, u)| Task {
            label: &label,
            chart: &chart,
            expect: &expect,
            backend,
            tol,
            point,
            u,
        })
        .collect();
    let records = run_tasks(tasks, opts.workers)?;
    let section = CalabiSection {
        r: spec.r,
        s: spec.s(),
        factors: doc.factors.clone(),
        c: spec.c.clone(),
        n: spec.dim(),
        f: spec.f_indices(),
        predicted_l1,
        predicted_c,
        factor_checks,
    };
    Ok(Report::new("calabi", backend_name(&backend).into(), tol, opts.points, opts.seed, Some(section), records))
}

/// Catalog listing, one model per line in a fixed order.
pub fn list_text() -> String {
    let mut out = String::new();
    for e in catalog() {
        out.push_str(&format!(
            "{} n={} family={} backend={} defaults: {}\n",
            e.label, e.n, e.family, e.backend, e.defaults
        ));
    }
    out
}

fn emit(report: &Report, opts: &RunOptions, started: Instant) -> i32 {
    let json = report.to_json();
    match &opts.output_path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, json) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return 2;
            }
        }
        None => print!("{json}"),
    }
    for r in report.records.iter().filter(|r| !r.pass) {
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        match &r.error {
            Some(e) => eprintln!("FAIL {} point {}: {e}", r.model, r.point),
            None => eprintln!("FAIL {} point {}: {}", r.model, r.point, failed.join(", ")),
        }
    }
    eprintln!(
        "{} of {} records passed in {:.2?}",
        report.summary.passed,
        report.summary.records,
        started.elapsed()
    );
    if report.all_pass() {
        0
    } else {
        1
    }
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::List => {
            print!("{}", list_text());
            return 0;
        }
        Command::Verify { labels, opts } => verify(labels, opts).map(|r| (r, opts)),
        Command::Calabi { spec, opts } => std::fs::read_to_string(spec)
            .map_err(|e| Error::Io(format!("{}: {e}", spec.display())))
            .and_then(|text| CalabiDocument::parse(&text))
            .and_then(|doc| calabi(&doc, opts))
            .map(|r| (r, opts)),
    };
    match outcome {
        Ok((report, opts)) => emit(&report, opts, started),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
