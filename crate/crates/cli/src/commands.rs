//! Subcommand implementations. Each returns the text for stdout and a
//! pass flag; errors propagate to `main` for the exit code.

use std::fmt::Write as _;
use std::path::Path;

use krein_photon::fock::{
    build_mode_basis, commutator_check, default_test_functions, gupta_bleuler_eta, FockSector,
    DEFAULT_SPAN_BOUND,
};
use krein_photon::harness::{
    dump_matrix_json, emit_report, random_field_function, render_report, run_suite, ReportFormat,
    SuiteConfig,
};
use krein_photon::representation::lorentz_act_rep;
use krein_photon::sampling::{self, seeded};
use krein_photon::schwartz::{
    cone_wavefunction, fourier_to_position, library, library_function, restrict_to_cone,
    s0_membership, TestFunction,
};
use krein_photon::transversal::extract_theta;
use krein_photon::wavefunction::{SampledState, StateSpec};
use krein_photon::{
    build_grid, Complex64, Error, GridConfig, MomentumWaveFunction, QuadratureGrid, Result, Sl2c,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde_json::{json, Value};

use crate::parse;
use crate::Outcome;

/// Residual bound for the Fock-sector checks.
const FOCK_TOL: f64 = 1e-7;
/// Bound on the antisymmetry of the smeared commutator.
const ANTISYMMETRY_TOL: f64 = 1e-10;

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn grid(cfg: &SuiteConfig, path: Option<&Path>) -> Result<QuadratureGrid> {
    let config = match path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<GridConfig>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => cfg.grid,
    };
    build_grid(config)
}

pub fn suites(cfg: &SuiteConfig, format: ReportFormat) -> Result<Outcome> {
    let report = run_suite(cfg)?;
    let path = emit_report(&report, format, &cfg.out_dir)?;
    eprintln!("report written to {}", path.display());
    Ok(Outcome {
        text: render_report(&report, format),
        passed: report.passed(),
    })
}

pub fn isometry(
    cfg: &SuiteConfig,
    rapidity: f64,
    axis: &str,
    state: &StateSpec,
    grid_path: Option<&Path>,
) -> Result<Outcome> {
    let g = grid(cfg, grid_path)?;
    let alpha = Sl2c::boost(parse::axis(axis)?, rapidity)?;
    let phi = state.build();
    let before = SampledState::new(&phi, &g)?;
    let after = SampledState::new(&lorentz_act_rep(&alpha, &phi)?, &g)?;
    let (k0, k1) = (before.krein(&before, &g)?, after.krein(&after, &g)?);
    let (h0, h1) = (before.hilbert(&before, &g)?, after.hilbert(&after, &g)?);
    let krein_error = k0.estimated_error + k1.estimated_error;
    let preserved = (k1.value - k0.value).norm() <= 3.0 * krein_error;
    let doc = json!({
        "state": phi.description(),
        "boost_rapidity": rapidity,
        "axis": parse::axis(axis)?,
        "grid_id": g.id(),
        "krein_before": complex(k0.value),
        "krein_after": complex(k1.value),
        "hilbert_before": complex(h0.value),
        "hilbert_after": complex(h1.value),
        "estimated_error": krein_error,
        "hilbert_estimated_error": h0.estimated_error + h1.estimated_error,
        "hilbert_norm_ratio": (h1.value.re / h0.value.re).sqrt(),
        "krein_preserved": preserved,
    });
    Ok(Outcome {
        text: pretty(&doc),
        passed: preserved,
    })
}

pub fn theta(cfg: &SuiteConfig, alpha: &str, samples: usize) -> Result<Outcome> {
    let alpha = parse::group_element(alpha)?;
    let mut rng = seeded(cfg.seed);
    let mut out = String::from("p1,p2,p3,theta,residual\n");
    let mut worst = 0.0f64;
    let mut written = 0;
    // points in the axis zone of either p or Λp have no rotation block
    while written < samples {
        let p = sampling::cone_point_off_axis(&mut rng, 1e-2, 1e2)?;
        let s = match extract_theta(&alpha, &p) {
            Ok(s) => s,
            Err(Error::AxisZone) => continue,
            Err(e) => return Err(e),
        };
        let q = p.spatial();
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.3e}",
            q[0], q[1], q[2], s.theta, s.residual
        );
        worst = worst.max(s.residual);
        written += 1;
    }
    Ok(Outcome {
        text: out,
        passed: worst < 1e-10,
    })
}

pub fn check_s0(name: &str, order: u32, tol: f64, restrict: bool) -> Result<Outcome> {
    let mut f = library_function(name)?;
    if restrict {
        f = restrict_to_cone(&f)?;
    }
    let report = s0_membership(&f, order, tol)?;
    let expected = library()
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| e.member);
    let doc = json!({
        "profile": name,
        "dim": f.dim(),
        "restricted": restrict,
        "is_member": report.is_member,
        "max_violation": report.max_violation,
        "order_checked": report.order_checked,
        "tol": report.tol,
        "derivatives_checked": report.derivatives_checked,
        "expected_member": expected,
    });
    Ok(Outcome {
        text: pretty(&doc),
        passed: expected.is_none_or(|m| m == report.is_member),
    })
}

/// A four-component library function restricted to the cone, or a state
/// written as `pol*profile + ...`.
fn momentum_state(name: &str) -> Result<MomentumWaveFunction> {
    if let Ok(f) = library_function(name) {
        if f.dim() == 4 && f.components() == 4 {
            return cone_wavefunction(&f);
        }
        if !name.contains('*') {
            return Err(Error::Config(format!(
                "{name:?} is not a four-component function on R⁴; use a state such as tplus*{name}"
            )));
        }
    }
    Ok(name.parse::<StateSpec>()?.build())
}

pub fn fourier(
    cfg: &SuiteConfig,
    name: &str,
    x: &str,
    grid_path: Option<&Path>,
) -> Result<Outcome> {
    let x = parse::numbers::<4>(x, "position")?;
    let phi = momentum_state(name)?;
    let g = grid(cfg, grid_path)?;
    let (value, error, warning) = match fourier_to_position(&phi, &g, x) {
        Ok(s) => (s.value, s.estimated_error, None),
        Err(Error::OscillationWarning {
            value,
            estimated_error,
            scale,
        }) => (
            value,
            estimated_error,
            Some(format!(
                "oscillatory quadrature unreliable: error {estimated_error:.3e} vs scale {scale:.3e}"
            )),
        ),
        Err(e) => return Err(e),
    };
    let doc = json!({
        "profile": name,
        "x": x,
        "grid_id": g.id(),
        "value": value.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
        "estimated_error": error,
        "warning": warning,
    });
    Ok(Outcome {
        text: pretty(&doc),
        passed: warning.is_none(),
    })
}

fn test_functions(modes: Option<&str>) -> Result<Vec<TestFunction>> {
    let Some(list) = modes else {
        return default_test_functions();
    };
    list.split(',')
        .map(|name| {
            let f = library_function(name.trim())?;
            if f.dim() != 4 || f.components() != 4 {
                return Err(Error::Config(format!(
                    "mode {name:?} is not a four-component function on R⁴"
                )));
            }
            Ok(f)
        })
        .collect()
}

fn matrix_csv(m: &DMatrix<Complex64>) -> String {
    let mut out = String::from("row,col,re,im\n");
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            let _ = writeln!(out, "{i},{j},{:.17e},{:.17e}", z.re, z.im);
        }
    }
    out
}

pub fn fock(
    cfg: &SuiteConfig,
    modes: Option<&str>,
    cutoff: usize,
    dump: bool,
    grid_path: Option<&Path>,
) -> Result<Outcome> {
    let g = grid(cfg, grid_path)?;
    let tests = test_functions(modes)?;
    let states: Vec<MomentumWaveFunction> =
        tests.iter().map(cone_wavefunction).collect::<Result<_>>()?;
    let sector = FockSector::new(build_mode_basis(&states, &g)?, cutoff)?;
    let eta = gupta_bleuler_eta(&sector)?;
    let (d, m) = (sector.dim(), sector.modes());
    let basis = &sector.mode_basis;

    let eta_involution = max_abs(&(&eta.matrix * &eta.matrix - DMatrix::identity(d, d)));
    let eta_hermiticity = max_abs(&(&eta.matrix - eta.matrix.adjoint()));

    let below = sector.below_ceiling();
    let mut ccr = 0.0f64;
    for i in 0..m {
        let a = sector.annihilation(i)?;
        for j in 0..m {
            let comm = a.commutator(&sector.creation(j)?).matrix;
            for &col in &below {
                for row in 0..d {
                    let want = if i == j && row == col { 1.0 } else { 0.0 };
                    ccr = ccr.max((comm[(row, col)] - want).norm());
                }
            }
        }
    }

    let mut rng = seeded(cfg.seed);
    let (mut sandwich, mut j_lift) = (0.0f64, 0.0f64);
    for _ in 0..3 {
        let c = DVector::from_fn(m, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let lhs = sector.creation_of(&c)?.sandwich(&eta);
        let rhs = sector.creation_of(&(&basis.j_matrix * &c))?;
        sandwich = sandwich.max(max_abs(&(lhs.matrix - rhs.matrix)));
        j_lift = j_lift.max(basis.j_consistency(&c, &g)?);
    }

    let (mut residual, mut oracle, mut direct, mut antisym) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut commutators = Vec::new();
    for _ in 0..3 {
        let phi = random_field_function(&mut rng, &tests)?;
        let psi = random_field_function(&mut rng, &tests)?;
        let ab = commutator_check(&phi, &psi, &sector, &eta, &g, DEFAULT_SPAN_BOUND)?;
        let ba = commutator_check(&psi, &phi, &sector, &eta, &g, DEFAULT_SPAN_BOUND)?;
        residual = residual
            .max(ab.commutator_matrix_residual)
            .max(ba.commutator_matrix_residual);
        oracle = oracle.max((ab.cnumber - ab.oracle_value).norm());
        direct = direct.max((ab.cnumber - ab.direct_value).norm());
        antisym = antisym.max((ab.cnumber + ba.cnumber).norm());
        commutators.push(json!({
            "cnumber": complex(ab.cnumber),
            "oracle_value": complex(ab.oracle_value),
            "direct_value": complex(ab.direct_value),
            "span_residuals": ab.span_residuals,
        }));
    }

    let fock_residuals = [
        basis.gram_residual,
        basis.involution_residual(),
        basis.hermiticity_residual(),
        eta_involution,
        eta_hermiticity,
        ccr,
        sandwich,
        j_lift,
        residual,
        oracle,
        direct,
    ];
    let passed = fock_residuals.iter().all(|&r| r < FOCK_TOL) && antisym < ANTISYMMETRY_TOL;

    if dump {
        std::fs::create_dir_all(&cfg.out_dir)?;
        std::fs::write(
            cfg.out_dir.join("j_matrix.csv"),
            matrix_csv(&basis.j_matrix),
        )?;
        std::fs::write(cfg.out_dir.join("eta.csv"), matrix_csv(&eta.matrix))?;
        eprintln!("matrices written to {}", cfg.out_dir.display());
    }

    let doc = json!({
        "modes": m,
        "test_functions": tests.iter().map(|t| t.label()).collect::<Vec<_>>(),
        "cutoff": cutoff,
        "dim": d,
        "grid_id": g.id(),
        "input_condition": basis.input_condition,
        "gram_residual": basis.gram_residual,
        "j_involution_residual": basis.involution_residual(),
        "j_hermiticity_residual": basis.hermiticity_residual(),
        "eta_involution_residual": eta_involution,
        "eta_hermiticity_residual": eta_hermiticity,
        "ccr_residual": ccr,
        "eta_sandwich_residual": sandwich,
        "j_pointwise_residual": j_lift,
        "commutator_matrix_residual": residual,
        "cnumber_vs_oracle": oracle,
        "cnumber_vs_direct": direct,
        "antisymmetry_residual": antisym,
        "commutators": commutators,
        "tolerance": FOCK_TOL,
        "passed": passed,
    });
    Ok(Outcome {
        text: pretty(&doc),
        passed,
    })
}

pub fn dump_matrix(p: &str) -> Result<Outcome> {
    Ok(Outcome {
        text: dump_matrix_json(parse::numbers::<3>(p, "momentum")?)?,
        passed: true,
    })
}

pub fn dump_grid(cfg: &SuiteConfig, grid_path: Option<&Path>) -> Result<Outcome> {
    Ok(Outcome {
        text: grid(cfg, grid_path)?.to_csv(),
        passed: true,
    })
}
