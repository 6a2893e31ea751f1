//! Acceptance criteria 1 to 11 at full size on the default grid. Each
//! criterion prints one PASS/FAIL line; the process exits non-zero if any
//! criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use krein_photon::fock::{
    build_mode_basis, commutator_check, default_mode_states, default_test_functions,
    gupta_bleuler_eta, FockSector, DEFAULT_SPAN_BOUND,
};
use krein_photon::harness::{random_field_function, run_suite, unboundedness_state, SuiteConfig};
use krein_photon::krein::{
    eigen_residual, involution_residual, spectral_reconstruction_residual, Precision,
};
use krein_photon::representation::{lorentz_act_rep, RepElement};
use krein_photon::sampling::{self, seeded};
use krein_photon::schwartz::{library, restrict_to_cone, s0_membership};
use krein_photon::transversal::{
    embed, extract_theta, helicity_eigencheck, induced_act, pair_deviation, transversal_norm,
    unphysical_remainder, TransversalPair,
};
use krein_photon::wavefunction::SampledState;
use krein_photon::{b_matrix, build_grid, Complex64, Error, GridConfig, QuadratureGrid, Sl2c};
use nalgebra::{DMatrix, DVector, Matrix4};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn grid() -> &'static QuadratureGrid {
    static G: OnceLock<QuadratureGrid> = OnceLock::new();
    G.get_or_init(|| build_grid(GridConfig::default()).expect("default grid builds"))
}

fn require(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

/// `B(p)` typed in from its closed form, independent of the library code.
fn b_oracle(s: [f64; 3]) -> Matrix4<f64> {
    let r = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    let (ri2, r2) = (1.0 / (r * r), r * r);
    let mut m = Matrix4::zeros();
    m[(0, 0)] = (ri2 + r2) / 2.0;
    for i in 0..3 {
        m[(0, i + 1)] = (ri2 - r2) / (2.0 * r) * s[i];
        m[(i + 1, 0)] = m[(0, i + 1)];
        for j in 0..3 {
            m[(i + 1, j + 1)] =
                (ri2 + r2 - 2.0) / (2.0 * r2) * s[i] * s[j] + if i == j { 1.0 } else { 0.0 };
        }
    }
    m
}

fn criterion_1() -> Outcome {
    let mut rng = seeded(101);
    let (mut recon, mut eig, mut oracle) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let p = sampling::cone_point_log_uniform(&mut rng, 1e-3, 1e3).map_err(e)?;
        recon =
            recon.max(spectral_reconstruction_residual(&p, Precision::DoubleDouble).map_err(e)?);
        eig = eig.max(eigen_residual(&p, Precision::DoubleDouble).map_err(e)?);
        let b = b_matrix(&p).map_err(e)?.entries;
        let o = b_oracle(p.spatial());
        oracle = oracle.max((b - o).abs().max() / o.abs().max());
    }
    require(
        recon < 1e-10 && eig < 1e-10 && oracle < 1e-14,
        format!("reconstruction {recon:.2e}, eigen residual {eig:.2e}, relative B vs closed-form oracle {oracle:.2e}"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = seeded(101);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = sampling::cone_point_log_uniform(&mut rng, 1e-3, 1e3).map_err(e)?;
        worst = worst.max(involution_residual(&p, Precision::DoubleDouble).map_err(e)?);
    }
    require(
        worst < 1e-9,
        format!("max ‖(JB)² - I‖∞ = {worst:.2e} over 1000 points"),
    )
}

struct Isometry {
    ratio: f64,
    error: f64,
}

fn krein_change(
    element: &RepElement,
    phi: &krein_photon::MomentumWaveFunction,
    psi: &krein_photon::MomentumWaveFunction,
) -> Result<Isometry, String> {
    let g = grid();
    let sample = |f: &krein_photon::MomentumWaveFunction| SampledState::new(f, g).map_err(e);
    let before = sample(phi)?.krein(&sample(psi)?, g).map_err(e)?;
    let after = sample(&element.apply(phi))?
        .krein(&sample(&element.apply(psi))?, g)
        .map_err(e)?;
    Ok(Isometry {
        ratio: (after.value - before.value).norm()
            / (before.estimated_error + after.estimated_error),
        error: before.estimated_error.max(after.estimated_error),
    })
}

fn criterion_3() -> Outcome {
    let mut rng = seeded(303);
    let (mut ratio, mut error) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let phi = sampling::mixed_state(&mut rng);
        let psi = sampling::mixed_state(&mut rng);
        let alpha = sampling::lorentz(&mut rng, 2.0).map_err(e)?;
        let r = krein_change(&RepElement::lorentz(alpha).map_err(e)?, &phi, &psi)?;
        ratio = ratio.max(r.ratio);
        error = error.max(r.error);
    }
    require(
        ratio <= 3.0 && error <= 1e-6,
        format!("max |Δkrein| / (sum of error estimates) = {ratio:.3}, largest error estimate {error:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let g = grid();
    let phi = unboundedness_state();
    let alpha = Sl2c::boost([0.0, 0.0, 1.0], 1.5).map_err(e)?;
    let moved = lorentz_act_rep(&alpha, &phi).map_err(e)?;
    let (s0, s1) = (
        SampledState::new(&phi, g).map_err(e)?,
        SampledState::new(&moved, g).map_err(e)?,
    );
    let ratio =
        (s1.hilbert(&s1, g).map_err(e)?.value.re / s0.hilbert(&s0, g).map_err(e)?.value.re).sqrt();
    let mut rng = seeded(404);
    let other = sampling::mixed_state(&mut rng);
    let element = RepElement::lorentz(alpha).map_err(e)?;
    let own = krein_change(&element, &phi, &phi)?;
    let cross = krein_change(&element, &phi, &other)?;
    let preserved = own.ratio <= 3.0 && cross.ratio <= 3.0 && own.error.max(cross.error) <= 1e-6;
    require(
        (ratio - 1.0).abs() > 0.01 && preserved,
        format!(
            "‖Uφ‖/‖φ‖ = {ratio:.4} for w_(r²)·e^(-r-1/r) at χ = 1.5; Krein |Δ|/err {:.3} (self), {:.3} (cross)",
            own.ratio, cross.ratio
        ),
    )
}

fn random_pair(rng: &mut rand_chacha::ChaCha8Rng) -> TransversalPair {
    let (a, b) = sampling::scalar_pair(rng);
    TransversalPair::new(a, b)
}

fn criterion_5() -> Outcome {
    let g = grid();
    let mut rng = seeded(505);
    let (mut worst, mut smallest) = (0.0f64, f64::INFINITY);
    for _ in 0..50 {
        let pair = random_pair(&mut rng);
        let s = SampledState::new(&embed(&pair), g).map_err(e)?;
        let k = s.krein(&s, g).map_err(e)?;
        let n = transversal_norm(&pair, g).map_err(e)?;
        worst = worst.max((k.value - n.value).norm() / (k.estimated_error + n.estimated_error));
        smallest = smallest.min(k.value.re);
    }
    require(
        worst <= 2.0 && smallest > 0.0,
        format!("max |krein - ∫|f|²| / (sum of error estimates) = {worst:.3}, smallest Krein norm² {smallest:.3e}"),
    )
}

fn criterion_6() -> Outcome {
    let g = grid();
    let mut rng = seeded(606);
    let (mut unitarity, mut law) = (0.0f64, 0.0f64);
    for _ in 0..30 {
        let pair = random_pair(&mut rng);
        let (a, b) = (
            sampling::lorentz(&mut rng, 2.0).map_err(e)?,
            sampling::lorentz(&mut rng, 2.0).map_err(e)?,
        );
        let before = transversal_norm(&pair, g).map_err(e)?;
        let after = transversal_norm(&induced_act(&a, &pair).map_err(e)?, g).map_err(e)?;
        unitarity = unitarity.max(
            (after.value - before.value).norm() / (before.estimated_error + after.estimated_error),
        );
        let points: Vec<_> = (0..40)
            .map(|_| sampling::cone_point_log_uniform(&mut rng, 0.05, 20.0))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        let seq = induced_act(&a, &induced_act(&b, &pair).map_err(e)?).map_err(e)?;
        let direct = induced_act(&(a * b), &pair).map_err(e)?;
        law = law.max(pair_deviation(&seq, &direct, &points).map_err(e)?);
    }
    require(
        unitarity <= 3.0 && law < 1e-9,
        format!("max |Δnorm²| / (sum of error estimates) = {unitarity:.3}, group-law deviation {law:.2e}"),
    )
}

fn criterion_7() -> Outcome {
    let g = grid();
    let mut rng = seeded(707);
    let probes: Vec<SampledState> = (0..20)
        .map(|_| SampledState::new(&embed(&random_pair(&mut rng)), g))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let (mut norm, mut cross) = (0.0f64, 0.0f64);
    for _ in 0..30 {
        let alpha = sampling::boost(&mut rng, 2.0).map_err(e)?;
        let rem = unphysical_remainder(&alpha, &random_pair(&mut rng)).map_err(e)?;
        let s = SampledState::new(&rem, g).map_err(e)?;
        norm = norm.max(s.krein(&s, g).map_err(e)?.value.norm());
        for probe in &probes {
            cross = cross.max(s.krein(probe, g).map_err(e)?.value.norm());
        }
    }
    require(
        norm <= 1e-7 && cross <= 1e-7,
        format!("max remainder Krein norm {norm:.2e}, max Krein product with transversal states {cross:.2e}"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = seeded(808);
    let (mut residual, mut skipped) = (0.0f64, 0);
    for _ in 0..1000 {
        let alpha = sampling::lorentz(&mut rng, 2.0).map_err(e)?;
        let p = sampling::cone_point_off_axis(&mut rng, 1e-2, 1e2).map_err(e)?;
        match extract_theta(&alpha, &p) {
            Ok(s) => residual = residual.max(s.residual),
            Err(Error::AxisZone) => skipped += 1,
            Err(err) => return Err(err.to_string()),
        }
    }
    let mut spectrum = 0.0f64;
    for psi in [PI / 6.0, PI / 3.0, PI / 2.0, PI] {
        for _ in 0..50 {
            let p = sampling::cone_point_off_axis(&mut rng, 1e-2, 1e2).map_err(e)?;
            let ev = helicity_eigencheck(psi, &p).map_err(e)?;
            let want = [
                Complex64::from_polar(1.0, psi),
                Complex64::from_polar(1.0, -psi),
            ];
            // at ψ = π both eigenvalues are -1 and the ordering is immaterial
            let d = (ev[0] - want[0]).norm().max((ev[1] - want[1]).norm());
            let swapped = (ev[0] - want[1]).norm().max((ev[1] - want[0]).norm());
            spectrum = spectrum.max(d.min(swapped));
        }
    }
    require(
        residual < 1e-10 && spectrum < 1e-9,
        format!("block residual {residual:.2e} ({skipped} axis-zone skips), eigenvalue deviation {spectrum:.2e}"),
    )
}

fn criterion_9() -> Outcome {
    let mut wrong = Vec::new();
    let (mut members, mut others) = (0, 0);
    for entry in library() {
        let mut verdicts = vec![
            s0_membership(&entry.function, 4, 1e-8)
                .map_err(e)?
                .is_member,
        ];
        if entry.function.dim() == 4 {
            verdicts.push(
                s0_membership(&restrict_to_cone(&entry.function).map_err(e)?, 4, 1e-8)
                    .map_err(e)?
                    .is_member,
            );
        }
        if verdicts.iter().any(|&v| v != entry.member) {
            wrong.push(entry.name);
        }
        if entry.member {
            members += 1;
        } else {
            others += 1;
        }
    }
    require(
        wrong.is_empty(),
        format!("{members} members and {others} non-members classified; misclassified: {wrong:?}"),
    )
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn criterion_10() -> Outcome {
    let g = grid();
    let basis = build_mode_basis(&default_mode_states().map_err(e)?, g).map_err(e)?;
    let sector = FockSector::new(basis, 2).map_err(e)?;
    let eta = gupta_bleuler_eta(&sector).map_err(e)?;
    let d = sector.dim();
    let involution = max_abs(&(&eta.matrix * &eta.matrix - DMatrix::identity(d, d)));

    let mut rng = seeded(1010);
    let mut rnd = || {
        Complex64::new(
            rand::Rng::random_range(&mut rng, -1.0..1.0),
            rand::Rng::random_range(&mut rng, -1.0..1.0),
        )
    };
    let (mut sandwich, mut j_lift) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let c = DVector::from_fn(sector.modes(), |_, _| rnd());
        let lhs = sector.creation_of(&c).map_err(e)?.sandwich(&eta);
        let rhs = sector
            .creation_of(&(&sector.mode_basis.j_matrix * &c))
            .map_err(e)?;
        sandwich = sandwich.max(max_abs(&(lhs.matrix - rhs.matrix)));
        j_lift = j_lift.max(sector.mode_basis.j_consistency(&c, g).map_err(e)?);
    }

    let tests = default_test_functions().map_err(e)?;
    let mut rng = seeded(1011);
    let (mut residual, mut oracle, mut direct, mut antisym, mut size) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..5 {
        let phi = random_field_function(&mut rng, &tests).map_err(e)?;
        let psi = random_field_function(&mut rng, &tests).map_err(e)?;
        let ab = commutator_check(&phi, &psi, &sector, &eta, g, DEFAULT_SPAN_BOUND).map_err(e)?;
        let ba = commutator_check(&psi, &phi, &sector, &eta, g, DEFAULT_SPAN_BOUND).map_err(e)?;
        residual = residual
            .max(ab.commutator_matrix_residual)
            .max(ba.commutator_matrix_residual);
        oracle = oracle.max((ab.cnumber - ab.oracle_value).norm());
        direct = direct.max((ab.cnumber - ab.direct_value).norm());
        antisym = antisym.max((ab.cnumber + ba.cnumber).norm());
        size = size.max(ab.cnumber.norm());
    }
    require(
        involution < 1e-7
            && sandwich < 1e-7
            && j_lift < 1e-7
            && residual < 1e-7
            && oracle < 1e-7
            && direct < 1e-7
            && antisym < 1e-10,
        format!(
            "{} modes, dim {d}: η²-I {involution:.1e}, ηa⁺η-a⁺(J·) {sandwich:.1e}, J vs pointwise J' {j_lift:.1e}, \
             c-number residual {residual:.1e}, vs oracle {oracle:.1e}, vs direct {direct:.1e}, \
             antisymmetry {antisym:.1e}, max |c| {size:.2e}",
            sector.modes()
        ),
    )
}

fn criterion_11() -> Outcome {
    let cfg = SuiteConfig::default();
    let first = run_suite(&cfg).map_err(e)?;
    let second = run_suite(&cfg).map_err(e)?;
    let failed: Vec<&str> = first.failures().map(|c| c.id.as_str()).collect();
    require(
        first.body_json() == second.body_json() && failed.is_empty(),
        format!(
            "{} checks, bodies identical: {}, failing checks: {failed:?}",
            first.checks.len(),
            first.body_json() == second.body_json()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("eigensystem cross-validation", criterion_1),
        ("involution", criterion_2),
        ("Krein isometry", criterion_3),
        ("unboundedness witness", criterion_4),
        ("transversal positivity and norm identity", criterion_5),
        ("induced unitarity and group law", criterion_6),
        ("unphysical remainder", criterion_7),
        ("helicity spectrum", criterion_8),
        ("S0 machinery", criterion_9),
        ("Fock sector", criterion_10),
        ("determinism", criterion_11),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg} [{secs:.1}s]", k + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name}: {msg} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
