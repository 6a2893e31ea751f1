//! Verification suites, their configuration and report serialization.
//!
//! Every check id corresponds to one invariant of the library modules. A
//! check never aborts its suite: numerical or range errors are recorded as
//! failures with the error text in `detail`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{cone_point, lorentz_act_point, spinor_to_lorentz, ConePoint, Sl2c};
use crate::error::{Error, Result};
use crate::fock::{
    build_mode_basis, commutator_check, default_test_functions, field_operator, gupta_bleuler_eta,
    FockSector, ATOM_SHIFT, DEFAULT_SPAN_BOUND,
};
use crate::krein::{self, b_eigensystem, b_matrix, fundamental_symmetry, Precision};
use crate::quadrature::{build_grid, GridConfig, QuadratureGrid};
use crate::representation::{max_deviation, translate, verify_representation_law, RepElement};
use crate::sampling;
use crate::schwartz::{
    self, atom, cone_wavefunction, library, restrict_to_cone, s0_membership, Atom, TestFunction,
};
use crate::transversal::{
    embed, extract_theta, induced_act, lorentz_condition_residual, pair_deviation, project_tr,
    transversal_norm,
};
use crate::wavefunction::{
    Envelope, MomentumWaveFunction, Polarization, Profile, SampledState, ScalarFunction,
};

pub const SCHEMA_VERSION: &str = "krein-photon/report/v1";

pub const SUITES: [&str; 6] = [
    "eigensystem",
    "isometry",
    "transversal",
    "theta",
    "schwartz",
    "fock",
];

/// `(suite, check id, invariant)` for every check the harness can run.
pub const CHECKS: [(&str, &str, &str); 28] = [
    ("eigensystem", "cone.antihomomorphism", "Λ(αβ) = Λ(β)Λ(α)"),
    ("eigensystem", "cone.metric_preservation", "ΛᵀgΛ = g"),
    (
        "eigensystem",
        "cone.cone_closure",
        "moved points stay on the cone",
    ),
    (
        "eigensystem",
        "cone.quadrature_convergence",
        "∫e^(-r)dμ error halves as radial order doubles",
    ),
    (
        "eigensystem",
        "krein.spectral_reconstruction",
        "B = Σ λ w wᵀ",
    ),
    ("eigensystem", "krein.involution", "(J B)² = I"),
    (
        "eigensystem",
        "krein.gauge_krein_null",
        "gauge eigenvectors have zero Krein density",
    ),
    (
        "eigensystem",
        "krein.transversal_eigenvalue_one",
        "B w± = w±, J w± = w±",
    ),
    (
        "isometry",
        "wavefunction.sesquilinearity",
        "linearity and conjugate symmetry of both products",
    ),
    (
        "isometry",
        "wavefunction.hilbert_positivity",
        "Hilbert norms are nonnegative",
    ),
    (
        "isometry",
        "wavefunction.krein_hilbert_agreement",
        "Krein = Hilbert on transversal states",
    ),
    (
        "isometry",
        "rep.krein_isometry",
        "representors preserve the Krein product",
    ),
    (
        "isometry",
        "rep.group_law",
        "U(α)U(β) = U(αβ), T(a)T(b) = T(a+b)",
    ),
    (
        "isometry",
        "rep.commutation_covariance",
        "U(α)T(a)U(α)⁻¹ = T(Λ(α)⁻¹a)",
    ),
    (
        "isometry",
        "rep.unboundedness_witness",
        "a boosted gauge state changes its Hilbert norm",
    ),
    (
        "transversal",
        "transversal.projector_idempotence",
        "embed∘project is idempotent",
    ),
    (
        "transversal",
        "transversal.lorentz_condition",
        "pᵘφ_μ = 0 on transversal states",
    ),
    (
        "transversal",
        "transversal.positivity",
        "Krein norm = ∫|f₊|²+|f₋|² ≥ 0",
    ),
    (
        "transversal",
        "transversal.induced_unitarity",
        "induced action preserves the L²⊕L² norm",
    ),
    (
        "transversal",
        "transversal.induced_group_law",
        "induced action composes",
    ),
    (
        "theta",
        "transversal.rotation_block_orthogonality",
        "extracted 2×2 blocks are rotations",
    ),
    (
        "schwartz",
        "schwartz.restriction_linearity",
        "cone restriction is linear",
    ),
    (
        "schwartz",
        "schwartz.fourier_linearity",
        "position-space transform is linear",
    ),
    (
        "schwartz",
        "schwartz.library_membership",
        "library members pass and non-members fail",
    ),
    ("fock", "fock.eta_involution", "η² = I and η = η†"),
    ("fock", "fock.ccr", "[a(i), a⁺(j)] = δᵢⱼ below the cutoff"),
    (
        "fock",
        "fock.commutator_antisymmetry",
        "[A(φ),A(ψ)] = -[A(ψ),A(φ)]",
    ),
    (
        "fock",
        "fock.physical_positivity",
        "⟨Ψ|ηΨ⟩ ≥ 0 on transversal excitations",
    ),
];

/// Check ids of one suite, in report order.
pub fn check_ids(suite: &str) -> Vec<&'static str> {
    CHECKS
        .iter()
        .filter(|c| c.0 == suite)
        .map(|c| c.1)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub grid: GridConfig,
    pub seed: u64,
    pub suites: Vec<String>,
    /// Keyed by check id or by suite name; a check id wins over its suite.
    pub tolerances: BTreeMap<String, f64>,
    pub out_dir: PathBuf,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            grid: GridConfig::default(),
            seed: 20160,
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            tolerances: BTreeMap::new(),
            out_dir: PathBuf::from("reports"),
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SuiteConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.suites.is_empty() {
            return Err(Error::Config("no suites selected".into()));
        }
        for (k, s) in self.suites.iter().enumerate() {
            if !SUITES.contains(&s.as_str()) {
                return Err(Error::Config(format!(
                    "unknown suite {s:?}; expected one of {SUITES:?}"
                )));
            }
            if self.suites[..k].contains(s) {
                return Err(Error::Config(format!("suite {s:?} selected twice")));
            }
        }
        for (key, tol) in &self.tolerances {
            let known = SUITES.contains(&key.as_str()) || CHECKS.iter().any(|c| c.1 == key);
            if !known {
                return Err(Error::Config(format!(
                    "tolerance override for unknown check {key:?}"
                )));
            }
            if !tol.is_finite() {
                return Err(Error::Config(format!(
                    "tolerance override for {key:?} is not finite"
                )));
            }
        }
        Ok(())
    }

    fn tolerance_for(&self, suite: &str, id: &str) -> Option<f64> {
        self.tolerances
            .get(id)
            .or_else(|| self.tolerances.get(suite))
            .copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// Whether `measured` must stay below or above `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub suite: String,
    pub status: Status,
    /// `None` when the check raised an error.
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub bound: Bound,
    pub grid_id: Option<String>,
    pub estimated_error: Option<f64>,
    pub detail: String,
    #[serde(skip)]
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub package: String,
    pub version: String,
    pub os: String,
    pub arch: String,
    pub threads: usize,
}

impl Fingerprint {
    pub fn current() -> Self {
        Fingerprint {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            threads: rayon::current_num_threads(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub config: SuiteConfig,
    pub fingerprint: Fingerprint,
    pub checks: Vec<CheckRecord>,
    pub total_runtime_ms: f64,
}

#[derive(Serialize)]
struct Body<'a> {
    schema_version: &'static str,
    suites: &'a [String],
    passed: bool,
    config: &'a SuiteConfig,
    fingerprint: &'a Fingerprint,
    checks: &'a [CheckRecord],
}

#[derive(Serialize)]
struct Timing<'a> {
    total_ms: f64,
    checks: BTreeMap<&'a str, f64>,
}

#[derive(Serialize)]
struct Document<'a> {
    body: Body<'a>,
    timing: Timing<'a>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// `0` when every check passed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    fn body(&self) -> Body<'_> {
        Body {
            schema_version: SCHEMA_VERSION,
            suites: &self.config.suites,
            passed: self.passed(),
            config: &self.config,
            fingerprint: &self.fingerprint,
            checks: &self.checks,
        }
    }

    /// The report without timings; identical configurations give identical
    /// bytes.
    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body()).expect("report serializes")
    }

    /// `{"body": …, "timing": …}`.
    pub fn to_json(&self) -> String {
        let doc = Document {
            body: self.body(),
            timing: Timing {
                total_ms: self.total_runtime_ms,
                checks: self
                    .checks
                    .iter()
                    .map(|c| (c.id.as_str(), c.runtime_ms))
                    .collect(),
            },
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "suite,check,status,measured,tolerance,bound,estimated_error,grid_id,runtime_ms,detail\n",
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{},{:e},{},{},{},{:.3},\"{}\"",
                c.suite,
                c.id,
                status_name(c.status),
                c.measured.map(|m| format!("{m:e}")).unwrap_or_default(),
                c.tolerance,
                bound_name(c.bound),
                c.estimated_error
                    .map(|e| format!("{e:e}"))
                    .unwrap_or_default(),
                c.grid_id.as_deref().unwrap_or(""),
                c.runtime_ms,
                c.detail.replace('"', "\"\"").replace('\n', " ")
            );
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let passed = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Pass)
            .count();
        let mut out = String::from("# Verification report\n\n");
        let _ = writeln!(
            out,
            "{passed}/{} checks passed. Seed {}, grid `{}`, {} {}, worker threads: {}.\n",
            self.checks.len(),
            self.config.seed,
            self.config.grid.id(),
            self.fingerprint.package,
            self.fingerprint.version,
            self.fingerprint.threads
        );
        out.push_str("| check | status | measured | bound | tolerance | est. error | ms |\n");
        out.push_str("|---|---|---|---|---|---|---|\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "| `{}` | {} | {} | {} | {:.3e} | {} | {:.0} |",
                c.id,
                status_name(c.status).to_uppercase(),
                c.measured
                    .map(|m| format!("{m:.3e}"))
                    .unwrap_or_else(|| "error".into()),
                if c.bound == Bound::AtMost {
                    "≤"
                } else {
                    "≥"
                },
                c.tolerance,
                c.estimated_error
                    .map(|e| format!("{e:.2e}"))
                    .unwrap_or_else(|| "-".into()),
                c.runtime_ms
            );
        }
        let failures: Vec<_> = self.failures().collect();
        if !failures.is_empty() {
            out.push_str("\n## Failures\n\n");
            for c in failures {
                let _ = writeln!(out, "- `{}`: {}", c.id, c.detail);
            }
        }
        out
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
    }
}

fn bound_name(b: Bound) -> &'static str {
    match b {
        Bound::AtMost => "at_most",
        Bound::AtLeast => "at_least",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(Error::Config(format!(
                "unknown report format {s:?} (json, csv, markdown)"
            ))),
        }
    }
}

pub fn render_report(report: &VerificationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Markdown => report.to_markdown(),
    }
}

/// Writes `report.<ext>` into `out_dir`, creating the directory if needed.
pub fn emit_report(
    report: &VerificationReport,
    format: ReportFormat,
    out_dir: &Path,
) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("report.{}", format.extension()));
    std::fs::write(&path, render_report(report, format))?;
    Ok(path)
}

/// Runs the selected suites. Suites run in parallel; the report lists checks
/// in suite order and within a suite in [`CHECKS`] order.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let start = Instant::now();
    let grid = build_grid(config.grid)?;
    let light = build_grid(GridConfig {
        angular_order: LIGHT_ANGULAR,
        radial_order: LIGHT_RADIAL,
        ..config.grid
    })?;
    let ctx = Ctx {
        grid: &grid,
        light: &light,
        seed: config.seed,
    };
    let per_suite: Vec<Vec<CheckRecord>> = config
        .suites
        .par_iter()
        .map(|suite| {
            check_ids(suite)
                .into_iter()
                .map(|id| run_check(config, &ctx, suite, id))
                .collect()
        })
        .collect();
    Ok(VerificationReport {
        config: config.clone(),
        fingerprint: Fingerprint::current(),
        checks: per_suite.into_iter().flatten().collect(),
        total_runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Orders of the small grid used for bulk checks of properties that hold on
/// any grid with positive weights.
const LIGHT_ANGULAR: usize = 8;
const LIGHT_RADIAL: usize = 32;

struct Ctx<'a> {
    grid: &'a QuadratureGrid,
    light: &'a QuadratureGrid,
    seed: u64,
}

impl Ctx<'_> {
    /// Independent stream per check, so results do not depend on which
    /// suites are selected or in which order they run.
    fn rng(&self, id: &str) -> ChaCha8Rng {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in id.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        sampling::seeded(self.seed ^ h)
    }
}

/// Outcome of one check before overrides are applied.
struct Measurement {
    measured: f64,
    tolerance: f64,
    bound: Bound,
    grid_id: Option<String>,
    estimated_error: Option<f64>,
    detail: String,
}

impl Measurement {
    fn at_most(measured: f64, tolerance: f64) -> Self {
        Measurement {
            measured,
            tolerance,
            bound: Bound::AtMost,
            grid_id: None,
            estimated_error: None,
            detail: String::new(),
        }
    }

    fn at_least(measured: f64, tolerance: f64) -> Self {
        Measurement {
            bound: Bound::AtLeast,
            ..Self::at_most(measured, tolerance)
        }
    }

    fn on(mut self, grid: &QuadratureGrid) -> Self {
        self.grid_id = Some(grid.id());
        self
    }

    fn error(mut self, e: f64) -> Self {
        self.estimated_error = Some(e);
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

fn run_check(config: &SuiteConfig, ctx: &Ctx, suite: &str, id: &'static str) -> CheckRecord {
    let start = Instant::now();
    let outcome = measure(ctx, id);
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut rec = CheckRecord {
        id: id.into(),
        suite: suite.into(),
        status: Status::Fail,
        measured: None,
        tolerance: f64::NAN,
        bound: Bound::AtMost,
        grid_id: None,
        estimated_error: None,
        detail: String::new(),
        runtime_ms,
    };
    match outcome {
        Ok(m) => {
            let tolerance = config.tolerance_for(suite, id).unwrap_or(m.tolerance);
            let ok = m.measured.is_finite()
                && match m.bound {
                    Bound::AtMost => m.measured <= tolerance,
                    Bound::AtLeast => m.measured >= tolerance,
                };
            rec.status = if ok { Status::Pass } else { Status::Fail };
            rec.measured = m.measured.is_finite().then_some(m.measured);
            rec.tolerance = tolerance;
            rec.bound = m.bound;
            rec.grid_id = m.grid_id;
            rec.estimated_error = m.estimated_error;
            rec.detail = m.detail;
        }
        Err(e) => {
            rec.tolerance = config.tolerance_for(suite, id).unwrap_or(0.0);
            rec.detail = format!("error: {e}");
        }
    }
    rec
}

fn measure(ctx: &Ctx, id: &str) -> Result<Measurement> {
    let mut rng = ctx.rng(id);
    let rng = &mut rng;
    match id {
        "cone.antihomomorphism" => cone_antihomomorphism(rng),
        "cone.metric_preservation" => cone_metric(rng),
        "cone.cone_closure" => cone_closure(rng),
        "cone.quadrature_convergence" => quadrature_convergence(ctx),
        "krein.spectral_reconstruction" => krein_points(rng, |p| {
            Ok(
                krein::spectral_reconstruction_residual(p, Precision::DoubleDouble)?
                    .max(krein::eigen_residual(p, Precision::DoubleDouble)?),
            )
        })
        .map(|m| {
            Measurement::at_most(m, 1e-10)
                .detail("max of ‖B - Σλwwᵀ‖∞ and ‖Bw - λw‖ in double-double")
        }),
        "krein.involution" => krein_points(rng, |p| {
            krein::involution_residual(p, Precision::DoubleDouble)
        })
        .map(|m| Measurement::at_most(m, 1e-9).detail("‖(JB)² - I‖∞ in double-double")),
        "krein.gauge_krein_null" => krein_points(rng, |p| {
            krein::gauge_krein_density(p, Precision::DoubleDouble)
        })
        .map(|m| Measurement::at_most(m, 1e-12).detail("|w† B J B w| / 2r for both gauge vectors")),
        "krein.transversal_eigenvalue_one" => krein_points(rng, |p| {
            krein::transversal_fixed_residual(p, Precision::DoubleDouble)
        })
        .map(|m| Measurement::at_most(m, 1e-12)),
        "wavefunction.sesquilinearity" => sesquilinearity(ctx, rng),
        "wavefunction.hilbert_positivity" => hilbert_positivity(ctx, rng),
        "wavefunction.krein_hilbert_agreement" => krein_hilbert_agreement(ctx, rng),
        "rep.krein_isometry" => krein_isometry(ctx, rng),
        "rep.group_law" => group_law(rng),
        "rep.commutation_covariance" => commutation_covariance(rng),
        "rep.unboundedness_witness" => unboundedness_witness(ctx),
        "transversal.projector_idempotence" => projector_idempotence(ctx, rng),
        "transversal.lorentz_condition" => lorentz_condition(ctx, rng),
        "transversal.positivity" => transversal_positivity(ctx, rng),
        "transversal.induced_unitarity" => induced_unitarity(ctx, rng),
        "transversal.induced_group_law" => induced_group_law(rng),
        "transversal.rotation_block_orthogonality" => rotation_blocks(rng),
        "schwartz.restriction_linearity" => restriction_linearity(rng),
        "schwartz.fourier_linearity" => fourier_linearity(ctx, rng),
        "schwartz.library_membership" => library_membership(),
        "fock.eta_involution" | "fock.ccr" | "fock.commutator_antisymmetry" => {
            fock_checks(ctx, rng, id)
        }
        "fock.physical_positivity" => physical_positivity(ctx, rng),
        _ => Err(Error::Config(format!("unknown check {id:?}"))),
    }
}

fn complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Points with `r` log-uniform in `[0.05, 20]`, where test states are not
/// negligible.
fn bulk_points(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<ConePoint>> {
    (0..n)
        .map(|_| sampling::cone_point_log_uniform(rng, 0.05, 20.0))
        .collect()
}

const POINTS: usize = 1000;
const PAIRS: usize = 100;

fn cone_antihomomorphism(rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let mut worst = 0.0f64;
    for _ in 0..PAIRS {
        let (a, b) = (sampling::lorentz(rng, 2.0)?, sampling::lorentz(rng, 2.0)?);
        let lhs = spinor_to_lorentz(&(a * b))?;
        let rhs = spinor_to_lorentz(&b)?.compose(&spinor_to_lorentz(&a)?);
        worst = worst.max((lhs.0 - rhs.0).abs().max());
    }
    Ok(Measurement::at_most(worst, 1e-10).detail(format!("{PAIRS} random pairs, rapidity ≤ 2")))
}

fn cone_metric(rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let mut worst = 0.0f64;
    for _ in 0..PAIRS {
        let (a, b) = (sampling::lorentz(rng, 2.0)?, sampling::lorentz(rng, 2.0)?);
        for alpha in [a, b, a * b] {
            worst = worst.max(spinor_to_lorentz(&alpha)?.metric_residual());
        }
    }
    Ok(Measurement::at_most(worst, 1e-10))
}

fn cone_closure(rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let mut worst = 0.0f64;
    for _ in 0..POINTS {
        let lambda = spinor_to_lorentz(&sampling::lorentz(rng, 2.0)?)?;
        let p = sampling::cone_point_log_uniform(rng, 1e-3, 1e3)?;
        let k = lambda.apply(&p.four());
        let q = lorentz_act_point(&lambda, &p)?;
        worst = worst.max((k[0] - q.r()).abs() / q.r().max(1.0));
    }
    Ok(Measurement::at_most(worst, 1e-10).detail("|(Λp)⁰ - |Λp⃗|| / max(1, r)"))
}

fn quadrature_convergence(ctx: &Ctx) -> Result<Measurement> {
    let cfg = ctx.grid.config();
    let exact = 2.0 * PI;
    // part of ∫ 2π r e^{-r} dr outside [ir, uv]
    let tail = |a: f64, b: f64| (1.0 + a) * (-a).exp() - (1.0 + b) * (-b).exp();
    let floor = (1.0 - tail(cfg.ir_cutoff, cfg.uv_cutoff)).abs() + 1e-14;
    let mut errors = Vec::new();
    for n in [8, 16, 32, 64] {
        let g = QuadratureGrid::new(GridConfig {
            angular_order: 2,
            radial_order: n,
            self_test_tol: f64::MAX,
            ..*cfg
        })?;
        let v = g.integrate(|p| Ok((-p.r()).exp().into()))?;
        errors.push((v.re - exact).abs() / exact);
    }
    let worst = errors
        .windows(2)
        .filter(|w| w[0] > 2.0 * floor)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max);
    let listed: Vec<String> = errors.iter().map(|e| format!("{e:.2e}")).collect();
    Ok(Measurement::at_most(worst, 0.5).detail(format!(
        "relative errors at radial orders 8,16,32,64: {}; cutoff floor {floor:.2e}",
        listed.join(", ")
    )))
}

fn krein_points<F>(rng: &mut ChaCha8Rng, f: F) -> Result<f64>
where
    F: Fn(&ConePoint) -> Result<f64>,
{
    let mut worst = 0.0f64;
    for _ in 0..POINTS {
        worst = worst.max(f(&sampling::cone_point_log_uniform(rng, 1e-3, 1e3)?)?);
    }
    Ok(worst)
}

fn sesquilinearity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let g = ctx.grid;
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let (phi, psi, chi) = (
            sampling::mixed_state(rng),
            sampling::mixed_state(rng),
            sampling::mixed_state(rng),
        );
        let (a, b) = (complex(rng), complex(rng));
        let mix = MomentumWaveFunction::linear_combination(&[(a, psi.clone()), (b, chi.clone())]);
        let s: Vec<SampledState> = [&phi, &psi, &chi, &mix]
            .iter()
            .map(|f| SampledState::new(f, g))
            .collect::<Result<_>>()?;
        let norm = |k: usize| -> Result<f64> { Ok(s[k].hilbert(&s[k], g)?.value.re.sqrt()) };
        let scale = norm(0)? * (a.norm() * norm(1)? + b.norm() * norm(2)?);
        for product in [SampledState::hilbert, SampledState::krein] {
            let lin = product(&s[0], &s[3], g)?.value
                - a * product(&s[0], &s[1], g)?.value
                - b * product(&s[0], &s[2], g)?.value;
            let sym = product(&s[0], &s[1], g)?.value - product(&s[1], &s[0], g)?.value.conj();
            worst = worst.max(lin.norm() / scale).max(sym.norm() / scale);
        }
    }
    Ok(Measurement::at_most(worst, 1e-10)
        .on(g)
        .detail("relative to ‖φ‖(|a|‖ψ‖ + |b|‖χ‖), 3 random triples"))
}

fn hilbert_positivity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let g = ctx.light;
    let mut worst = 0.0f64;
    let mut smallest = f64::INFINITY;
    for _ in 0..200 {
        let n = rng.random_range(1..=4);
        let pols: Vec<Polarization> = (0..n)
            .map(|_| Polarization::ALL[rng.random_range(0..4)])
            .collect();
        let phi = sampling::state(rng, &pols);
        let r = crate::wavefunction::hilbert_inner(&phi, &phi, g)?;
        let e = r.estimated_error;
        worst = worst.max(-r.value.re - e).max(r.value.im.abs() - e);
        smallest = smallest.min(r.value.re);
    }
    Ok(Measurement::at_most(worst.max(0.0), 0.0)
        .on(g)
        .detail(format!("200 random states; smallest norm² {smallest:.3e}")))
}

fn krein_hilbert_agreement(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let g = ctx.grid;
    let states: Vec<SampledState> = (0..6)
        .map(|_| {
            SampledState::new(
                &sampling::state(rng, &[Polarization::TPlus, Polarization::TMinus]),
                g,
            )
        })
        .collect::<Result<_>>()?;
    let (mut worst, mut err) = (0.0f64, 0.0f64);
    for a in &states {
        for b in &states {
            let (k, h) = (a.krein(b, g)?, a.hilbert(b, g)?);
            let e = k.estimated_error + h.estimated_error;
            worst = worst.max((k.value - h.value).norm() / e);
            err = err.max(e);
        }
    }
    Ok(Measurement::at_most(worst, 2.0)
        .on(g)
        .error(err)
        .detail("max |krein - hilbert| / (sum of error estimates) over 36 transversal pairs"))
}

fn krein_isometry(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let g = ctx.grid;
    let (mut worst, mut err) = (0.0f64, 0.0f64);
    for _ in 0..3 {
        let phi = sampling::mixed_state(rng);
        let psi = sampling::mixed_state(rng);
        let before = SampledState::new(&phi, g)?.krein(&SampledState::new(&psi, g)?, g)?;
        let a = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        for element in [
            RepElement::translation(a)?,
            RepElement::lorentz(sampling::lorentz(rng, 2.0)?)?,
            RepElement::conjugate_lorentz(sampling::lorentz(rng, 2.0)?)?,
        ] {
            let after = SampledState::new(&element.apply(&phi), g)?
                .krein(&SampledState::new(&element.apply(&psi), g)?, g)?;
            let e = before.estimated_error + after.estimated_error;
            worst = worst.max((after.value - before.value).norm() / e);
            err = err.max(before.estimated_error).max(after.estimated_error);
        }
    }
    Ok(Measurement::at_most(worst, 3.0).on(g).error(err).detail(
        "max |Δkrein| / (sum of error estimates); translations, Lorentz and conjugate Lorentz",
    ))
}

fn group_law(rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let phi = sampling::mixed_state(rng);
        let points = bulk_points(rng, 40)?;
        let (a, b) = (sampling::lorentz(rng, 2.0)?, sampling::lorentz(rng, 2.0)?);
        worst = worst.max(verify_representation_law(&a, &b, &phi, &points)?);
        let (x, y) = (random_four(rng), random_four(rng));
        let xy = [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]];
        worst = worst.max(max_deviation(
            &translate(x, &translate(y, &phi)),
            &translate(xy, &phi),
            &points,
        )?);
    }
    Ok(Measurement::at_most(worst, 1e-9)
        .detail("30 random Lorentz and translation pairs, 40 points each"))
}

fn random_four(rng: &mut ChaCha8Rng) -> [f64; 4] {
    std::array::from_fn(|_| rng.random_range(-2.0..2.0))
}

fn commutation_covariance(rng: &mut ChaCha8Rng) -> Result<Measurement> {
    use crate::representation::lorentz_act_rep;
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let phi = sampling::mixed_state(rng);
        let points = bulk_points(rng, 40)?;
        let alpha = sampling::lorentz(rng, 2.0)?;
        let a = random_four(rng);
        let lhs = lorentz_act_rep(
            &alpha,
            &translate(a, &lorentz_act_rep(&alpha.inverse(), &phi)?),
        )?;
        let rhs = translate(spinor_to_lorentz(&alpha)?.inverse().apply(&a), &phi);
        worst = worst.max(max_deviation(&lhs, &rhs, &points)?);
    }
    Ok(Measurement::at_most(worst, 1e-9))
}

/// The gauge state `w_{r²} e^{-r-1/r}`, boosted along z with rapidity 1.5 by
/// the witness check. The other gauge state `w_{r⁻²} g` is no witness: its
/// direction is the null vector `p` itself, so `U(α)` maps it to
/// `(r/r') w_{r⁻²}(p) g(Λp)` and its Hilbert norm is exactly invariant.
pub fn unboundedness_state() -> MomentumWaveFunction {
    MomentumWaveFunction::polarized(
        Polarization::GaugeHigh,
        ScalarFunction::from_profile(Profile::new(Envelope::ExpIr, 1.0)),
    )
}

fn unboundedness_witness(ctx: &Ctx) -> Result<Measurement> {
    let g = ctx.grid;
    let phi = unboundedness_state();
    let alpha = Sl2c::boost([0.0, 0.0, 1.0], 1.5)?;
    let moved = crate::representation::lorentz_act_rep(&alpha, &phi)?;
    let (s0, s1) = (SampledState::new(&phi, g)?, SampledState::new(&moved, g)?);
    let (h0, h1) = (s0.hilbert(&s0, g)?, s1.hilbert(&s1, g)?);
    let (k0, k1) = (s0.krein(&s0, g)?, s1.krein(&s1, g)?);
    let ratio = (h1.value.re / h0.value.re).sqrt();
    Ok(Measurement::at_least((ratio - 1.0).abs(), 0.01)
        .on(g)
        .error(h0.estimated_error.max(h1.estimated_error))
        .detail(format!(
            "‖Uφ‖/‖φ‖ = {ratio:.6}; krein before {:.3e}, after {:.3e}",
            k0.value.re, k1.value.re
        )))
}

fn random_pair(rng: &mut ChaCha8Rng) -> crate::transversal::TransversalPair {
    let (a, b) = sampling::scalar_pair(rng);
    crate::transversal::TransversalPair::new(a, b)
}

fn projector_idempotence(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let nodes: Vec<ConePoint> = ctx.grid.nodes().iter().step_by(61).copied().collect();
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let phi = sampling::mixed_state(rng);
        let once = embed(&project_tr(&phi));
        let twice = embed(&project_tr(&once));
        worst = worst.max(max_deviation(&once, &twice, &nodes)?);
    }
    Ok(Measurement::at_most(worst, 1e-12)
        .on(ctx.grid)
        .detail(format!("5 random states at {} grid nodes", nodes.len())))
}

fn lorentz_condition(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let mut worst = 0.0f64;
    for _ in 0..3 {
        worst = worst.max(lorentz_condition_residual(&random_pair(rng), ctx.grid)?);
    }
    Ok(Measurement::at_most(worst, 1e-12)
        .on(ctx.grid)
        .detail("every grid node, 3 random pairs"))
}

fn transversal_positivity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let g = ctx.grid;
    let (mut worst, mut err) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let pair = random_pair(rng);
        let s = SampledState::new(&embed(&pair), g)?;
        let k = s.krein(&s, g)?;
        let n = transversal_norm(&pair, g)?;
        let e = k.estimated_error + n.estimated_error;
        let deviation = (k.value - n.value).norm().max(-k.value.re);
        worst = worst.max(deviation / e);
        err = err.max(e);
    }
    Ok(Measurement::at_most(worst, 1.0)
        .on(g)
        .error(err)
        .detail("max |krein - ∫|f|²| / (sum of error estimates), 5 random pairs"))
}

fn induced_unitarity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let g = ctx.grid;
    let (mut worst, mut err) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let pair = random_pair(rng);
        let alpha = sampling::lorentz(rng, 2.0)?;
        let before = transversal_norm(&pair, g)?;
        let after = transversal_norm(&induced_act(&alpha, &pair)?, g)?;
        let e = before.estimated_error + after.estimated_error;
        worst = worst.max((after.value - before.value).norm() / e);
        err = err.max(e);
    }
    Ok(Measurement::at_most(worst, 3.0)
        .on(g)
        .error(err)
        .detail("max |Δnorm²| / (sum of error estimates), 5 random pairs"))
}

fn induced_group_law(rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let pair = random_pair(rng);
        let points = bulk_points(rng, 40)?;
        let (a, b) = (sampling::lorentz(rng, 2.0)?, sampling::lorentz(rng, 2.0)?);
        let seq = induced_act(&a, &induced_act(&b, &pair)?)?;
        let direct = induced_act(&(a * b), &pair)?;
        worst = worst.max(pair_deviation(&seq, &direct, &points)?);
    }
    Ok(Measurement::at_most(worst, 1e-9).detail("30 random triples, 40 points each"))
}

fn rotation_blocks(rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let (mut worst, mut skipped) = (0.0f64, 0usize);
    for _ in 0..POINTS {
        let alpha = sampling::lorentz(rng, 2.0)?;
        let p = sampling::cone_point_off_axis(rng, 1e-2, 1e2)?;
        match extract_theta(&alpha, &p) {
            Ok(s) => worst = worst.max(s.residual),
            Err(Error::AxisZone) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(Measurement::at_most(worst, 1e-10).detail(format!(
        "{POINTS} random (α, p); {skipped} skipped with Λp in the axis zone"
    )))
}

fn random_real(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), 0.0)
}

fn restriction_linearity(rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let fs: Vec<TestFunction> = library()
        .into_iter()
        .filter(|e| e.function.dim() == 4 && e.function.components() == 4)
        .map(|e| e.function)
        .collect();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = &fs[rng.random_range(0..fs.len())];
        let g = &fs[rng.random_range(0..fs.len())];
        let (a, b) = (complex(rng), complex(rng));
        let lhs = restrict_to_cone(&f.combine(a, g, b)?)?;
        let rhs = restrict_to_cone(f)?.combine(a, &restrict_to_cone(g)?, b)?;
        for p in bulk_points(rng, 25)? {
            let s = p.spatial();
            for (x, y) in lhs.eval(&s).iter().zip(rhs.eval(&s)) {
                worst = worst.max((x - y).norm());
            }
        }
    }
    Ok(Measurement::at_most(worst, 0.0)
        .detail("20 random combinations of vector atoms, 25 points each"))
}

fn fourier_linearity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let g = ctx.grid;
    let phi = cone_wavefunction(&atom(Atom::Helical, [0.0; 4])?)?;
    let psi = cone_wavefunction(&atom(Atom::Longitudinal, ATOM_SHIFT)?)?;
    let (a, b) = (complex(rng), complex(rng));
    let mix = MomentumWaveFunction::linear_combination(&[(a, phi.clone()), (b, psi.clone())]);
    let mut worst = 0.0f64;
    for x in [[0.0; 4], [0.3, -0.2, 0.5, 0.1]] {
        let (fp, fq, fm) = (
            schwartz::fourier_to_position(&phi, g, x)?,
            schwartz::fourier_to_position(&psi, g, x)?,
            schwartz::fourier_to_position(&mix, g, x)?,
        );
        for i in 0..4 {
            worst = worst.max((fm.value[i] - a * fp.value[i] - b * fq.value[i]).norm());
        }
    }
    Ok(Measurement::at_most(worst, 1e-12)
        .on(g)
        .detail("2 sample points x"))
}

fn library_membership() -> Result<Measurement> {
    let mut wrong = Vec::new();
    for entry in library() {
        let mut verdicts = vec![s0_membership(&entry.function, 4, 1e-8)?.is_member];
        if entry.function.dim() == 4 {
            verdicts.push(s0_membership(&restrict_to_cone(&entry.function)?, 4, 1e-8)?.is_member);
        }
        if verdicts.iter().any(|&v| v != entry.member) {
            wrong.push(entry.name);
        }
    }
    let detail = if wrong.is_empty() {
        "K = 4, tol = 1e-8, before and after cone restriction".to_string()
    } else {
        format!("misclassified: {}", wrong.join(", "))
    };
    Ok(Measurement::at_most(wrong.len() as f64, 0.0).detail(detail))
}

fn fock_checks(ctx: &Ctx, rng: &mut ChaCha8Rng, id: &str) -> Result<Measurement> {
    let g = ctx.grid;
    let tests = default_test_functions()?;
    let states: Vec<MomentumWaveFunction> =
        tests.iter().map(cone_wavefunction).collect::<Result<_>>()?;
    let sector = FockSector::new(build_mode_basis(&states, g)?, 2)?;
    let eta = gupta_bleuler_eta(&sector)?;
    let d = sector.dim();
    let detail = format!("{} modes, cutoff 2, dimension {d}", sector.modes());
    match id {
        "fock.eta_involution" => {
            let sq = max_abs(&(&eta.matrix * &eta.matrix - DMatrix::identity(d, d)));
            let herm = max_abs(&(&eta.matrix - eta.matrix.adjoint()));
            Ok(Measurement::at_most(sq.max(herm), 1e-7)
                .on(g)
                .detail(detail))
        }
        "fock.ccr" => {
            let below = sector.below_ceiling();
            let mut worst = 0.0f64;
            for i in 0..sector.modes() {
                let a = sector.annihilation(i)?;
                for j in 0..sector.modes() {
                    let comm = a.commutator(&sector.creation(j)?).matrix;
                    for &col in &below {
                        for row in 0..d {
                            let want = if i == j && row == col { 1.0 } else { 0.0 };
                            worst = worst.max((comm[(row, col)] - want).norm());
                        }
                    }
                }
            }
            Ok(Measurement::at_most(worst, 1e-12).detail(detail))
        }
        _ => {
            let mut worst = 0.0f64;
            for _ in 0..3 {
                let phi = random_field_function(rng, &tests)?;
                let psi = random_field_function(rng, &tests)?;
                let ab = commutator_check(&phi, &psi, &sector, &eta, g, DEFAULT_SPAN_BOUND)?;
                let ba = commutator_check(&psi, &phi, &sector, &eta, g, DEFAULT_SPAN_BOUND)?;
                worst = worst.max((ab.cnumber + ba.cnumber).norm());
            }
            Ok(Measurement::at_most(worst, 1e-10).on(g).detail(detail))
        }
    }
}

/// Real combination of the given test functions with random coefficients.
pub fn random_field_function(rng: &mut ChaCha8Rng, tests: &[TestFunction]) -> Result<TestFunction> {
    let mut acc = tests[0].combine(random_real(rng), &tests[0], Complex64::new(0.0, 0.0))?;
    for t in &tests[1..] {
        acc = acc.combine(Complex64::new(1.0, 0.0), t, random_real(rng))?;
    }
    Ok(acc)
}

/// Helical and meridional atoms, unshifted and shifted: a purely transversal
/// mode set.
pub fn transversal_test_functions() -> Result<Vec<TestFunction>> {
    let mut out = Vec::new();
    for shift in [[0.0; 4], ATOM_SHIFT] {
        for kind in [Atom::Helical, Atom::Meridional] {
            out.push(atom(kind, shift)?);
        }
    }
    Ok(out)
}

fn physical_positivity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    let g = ctx.grid;
    let tests = transversal_test_functions()?;
    let states: Vec<MomentumWaveFunction> =
        tests.iter().map(cone_wavefunction).collect::<Result<_>>()?;
    let sector = FockSector::new(build_mode_basis(&states, g)?, 2)?;
    let eta = gupta_bleuler_eta(&sector)?;
    let fields: Vec<DMatrix<Complex64>> = tests
        .iter()
        .map(|t| {
            Ok(field_operator(t, &sector, &eta, g, DEFAULT_SPAN_BOUND)?
                .operator
                .matrix)
        })
        .collect::<Result<_>>()?;
    let vac = sector.vacuum();
    let mut smallest = f64::INFINITY;
    for _ in 0..20 {
        let mut psi: DVector<Complex64> = &vac * complex(rng);
        for a in &fields {
            psi += a * &vac * complex(rng);
            for b in &fields {
                psi += a * (b * &vac) * complex(rng);
            }
        }
        smallest = smallest.min((psi.adjoint() * &eta.matrix * &psi)[(0, 0)].re);
    }
    Ok(Measurement::at_least(smallest, -1e-8).on(g).detail(format!(
        "{} transversal modes, 20 random states built from A(φ)|0⟩",
        sector.modes()
    )))
}

/// `B(p)`, its eigensystem and `J'(p)` as a JSON document with every number
/// printed to 17 significant digits.
pub fn dump_matrix_json(spatial: [f64; 3]) -> Result<String> {
    let p = cone_point(spatial)?;
    let b = b_matrix(&p)?;
    let es = b_eigensystem(&p)?;
    let jp = fundamental_symmetry(&p)?;
    let num = |x: f64| format!("{x:.16e}");
    let matrix = |m: &nalgebra::Matrix4<f64>| {
        let rows: Vec<String> = (0..4)
            .map(|i| {
                format!(
                    "[{}]",
                    (0..4)
                        .map(|j| num(m[(i, j)]))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .collect();
        format!("[\n    {}\n  ]", rows.join(",\n    "))
    };
    let names = ["w_plus", "w_minus", "w_low", "w_high"];
    let pairs: Vec<String> = es
        .pairs
        .iter()
        .zip(names)
        .map(|(pair, name)| {
            format!(
                "{{\"name\": \"{name}\", \"value\": {}, \"vector\": [{}]}}",
                num(pair.value),
                pair.vector
                    .iter()
                    .map(|&x| num(x))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect();
    Ok(format!(
        "{{\n  \"p\": [{}],\n  \"r\": {},\n  \"axis_zone\": {},\n  \"b\": {},\n  \"eigensystem\": [\n    {}\n  ],\n  \"j_prime\": {}\n}}\n",
        spatial.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", "),
        num(p.r()),
        krein::in_axis_zone(&p),
        matrix(&b.entries),
        pairs.join(",\n    "),
        matrix(&jp.entries)
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_table_is_consistent() {
        let mut ids: Vec<&str> = CHECKS.iter().map(|c| c.1).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CHECKS.len());
        for (suite, _, _) in CHECKS {
            assert!(SUITES.contains(&suite));
        }
        for s in SUITES {
            assert!(!check_ids(s).is_empty());
        }
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let bad = SuiteConfig::from_json(r#"{"suites": ["eigensystem", "nope"]}"#);
        assert!(matches!(bad, Err(Error::Config(_))));
        assert!(SuiteConfig::from_json(r#"{"colour": 1}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"tolerances": {"krein.nope": 1.0}}"#).is_err());
        let ok = SuiteConfig::from_json(
            r#"{"seed": 4, "suites": ["theta"], "tolerances": {"isometry": 1e-30}}"#,
        )
        .unwrap();
        assert_eq!(ok.seed, 4);
        assert_eq!(ok.tolerance_for("isometry", "rep.group_law"), Some(1e-30));
        assert_eq!(
            ok.tolerance_for("theta", "transversal.rotation_block_orthogonality"),
            None
        );
    }

    #[test]
    fn small_suite_reports() {
        let cfg = SuiteConfig {
            grid: GridConfig {
                angular_order: 8,
                radial_order: 32,
                ..GridConfig::default()
            },
            suites: vec!["theta".into(), "eigensystem".into()],
            ..SuiteConfig::default()
        };
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.checks.len(), 1 + check_ids("eigensystem").len());
        assert!(report.passed(), "{}", report.to_markdown());
        assert_eq!(report.exit_code(), 0);
        assert_eq!(report.to_csv().lines().count(), report.checks.len() + 1);
        let doc: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(doc["body"]["schema_version"], SCHEMA_VERSION);
        assert!(!report.body_json().contains("runtime"));
        assert_eq!(report.body_json(), run_suite(&cfg).unwrap().body_json());

        let strict = SuiteConfig {
            tolerances: [("eigensystem".to_string(), 1e-30)].into_iter().collect(),
            ..cfg
        };
        let report = run_suite(&strict).unwrap();
        assert_eq!(report.exit_code(), 1);
        assert!(
            report
                .check("transversal.rotation_block_orthogonality")
                .unwrap()
                .status
                == Status::Pass
        );
    }

    #[test]
    fn matrix_dump_is_json_with_full_precision() {
        let text = dump_matrix_json([0.3, -1.2, 2.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["b"].as_array().unwrap().len(), 4);
        assert_eq!(v["eigensystem"][3]["name"], "w_high");
        let p = cone_point([0.3, -1.2, 2.0]).unwrap();
        let b = b_matrix(&p).unwrap().entries;
        assert!((v["b"][1][2].as_f64().unwrap() - b[(1, 2)]).abs() < 1e-15);
        // 17 significant digits round-trip exactly
        let printed = format!("{:.16e}", b[(1, 2)]);
        assert!(text.contains(&printed));
        assert_eq!(printed.parse::<f64>().unwrap(), b[(1, 2)]);
    }
}
