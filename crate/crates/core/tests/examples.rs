//! Worked examples that cross module boundaries, checked against closed-form
//! values.

use std::f64::consts::PI;
use std::sync::OnceLock;

use krein_photon::fock::{build_mode_basis, gupta_bleuler_eta, FockSector};
use krein_photon::representation::{conjugate_lorentz_act, lorentz_act_rep, translate};
use krein_photon::schwartz::fourier_to_position;
use krein_photon::transversal::{embed, project_tr, transversal_norm, TransversalPair};
use krein_photon::wavefunction::{Envelope, Polarization, Profile, SampledState, ScalarFunction};
use krein_photon::{
    build_grid, hilbert_inner, krein_inner, Complex64, ConePoint, Error, GridConfig,
    MomentumWaveFunction, QuadratureGrid, Sl2c,
};

fn light_grid() -> &'static QuadratureGrid {
    static G: OnceLock<QuadratureGrid> = OnceLock::new();
    G.get_or_init(|| {
        build_grid(GridConfig {
            angular_order: 8,
            radial_order: 32,
            ..GridConfig::default()
        })
        .unwrap()
    })
}

fn default_grid() -> &'static QuadratureGrid {
    static G: OnceLock<QuadratureGrid> = OnceLock::new();
    G.get_or_init(|| build_grid(GridConfig::default()).unwrap())
}

fn profile(env: Envelope, scale: f64) -> ScalarFunction {
    ScalarFunction::from_profile(Profile::new(env, scale))
}

fn polarized(pol: Polarization, env: Envelope) -> MomentumWaveFunction {
    MomentumWaveFunction::polarized(pol, profile(env, 1.0))
}

fn hilbert_norm_ratio(phi: &MomentumWaveFunction, alpha: &Sl2c) -> (f64, f64) {
    let g = default_grid();
    let before = SampledState::new(phi, g).unwrap();
    let after = SampledState::new(&lorentz_act_rep(alpha, phi).unwrap(), g).unwrap();
    let n0 = before.hilbert(&before, g).unwrap();
    let n1 = after.hilbert(&after, g).unwrap();
    let ratio = n1.value.re / n0.value.re;
    (
        ratio,
        (n0.estimated_error + n1.estimated_error) / n0.value.re,
    )
}

#[test]
fn transversal_exponential_has_equal_products() {
    let g = light_grid();
    let phi = polarized(Polarization::TPlus, Envelope::Exp);
    let h = hilbert_inner(&phi, &phi, g).unwrap();
    let k = krein_inner(&phi, &phi, g).unwrap();
    assert!((h.value - PI / 2.0).norm() < 1e-8, "{h:?}");
    assert!((k.value - PI / 2.0).norm() < 1e-8, "{k:?}");
}

#[test]
fn gauge_states_are_krein_null_and_hilbert_orthogonal() {
    let g = light_grid();
    let low = polarized(Polarization::GaugeLow, Envelope::Exp);
    let high = polarized(Polarization::GaugeHigh, Envelope::Exp);
    for phi in [&low, &high] {
        let k = krein_inner(phi, phi, g).unwrap();
        assert!(k.value.norm() <= k.estimated_error.max(1e-12), "{k:?}");
        assert!(hilbert_inner(phi, phi, g).unwrap().value.re > 0.0);
    }
    let cross = hilbert_inner(&low, &high, g).unwrap();
    assert!(
        cross.value.norm() <= cross.estimated_error.max(1e-12),
        "{cross:?}"
    );
}

#[test]
fn low_gauge_states_keep_their_hilbert_norm_under_boosts() {
    let alpha = Sl2c::boost([0.0, 0.0, 1.0], 1.5).unwrap();
    let (ratio, err) =
        hilbert_norm_ratio(&polarized(Polarization::GaugeLow, Envelope::ExpIr), &alpha);
    assert!(
        (ratio - 1.0).abs() <= 3.0 * err + 1e-10,
        "ratio {ratio}, error {err:e}"
    );
    let (ratio, err) =
        hilbert_norm_ratio(&polarized(Polarization::GaugeHigh, Envelope::ExpIr), &alpha);
    assert!(
        err < 1e-6 && (ratio.sqrt() - 1.0).abs() > 0.01,
        "ratio {ratio}, error {err:e}"
    );
}

#[test]
fn conjugate_and_plain_actions_agree_on_transversal_states() {
    let pair = TransversalPair::new(
        profile(Envelope::GaussIr, 1.0),
        profile(Envelope::Poly2GaussIr, 0.8).scaled(Complex64::new(0.3, -0.7)),
    );
    let phi = embed(&pair);
    let alpha =
        Sl2c::boost([0.6, 0.0, 0.8], 0.9).unwrap() * Sl2c::rotation([0.0, 1.0, 0.0], 0.4).unwrap();
    let plain = project_tr(&lorentz_act_rep(&alpha, &phi).unwrap());
    let conj = project_tr(&conjugate_lorentz_act(&alpha, &phi).unwrap());
    let mut checked = 0;
    for k in 0..40 {
        let t = k as f64;
        let p = ConePoint::from_spherical(0.1 * 1.15f64.powf(t), (0.7 * t).cos(), 1.3 * t).unwrap();
        match (plain.eval(&p), conj.eval(&p)) {
            (Ok(a), Ok(b)) => {
                checked += 1;
                assert!((a[0] - b[0]).norm() < 1e-12 && (a[1] - b[1]).norm() < 1e-12);
            }
            (Err(Error::AxisZone), _) | (_, Err(Error::AxisZone)) => {}
            (a, b) => panic!("{a:?} {b:?}"),
        }
    }
    assert!(checked > 30);
}

#[test]
fn embedded_norm_matches_component_norm() {
    let g = light_grid();
    let pair = TransversalPair::new(
        profile(Envelope::Exp, 1.2),
        profile(Envelope::Exp, 0.7).scaled(Complex64::new(0.0, 2.0)),
    );
    let h = hilbert_inner(&embed(&pair), &embed(&pair), g).unwrap();
    let n = transversal_norm(&pair, g).unwrap();
    // |e^{-r/s}|² is the exponential envelope at scale s/2
    let expected = Envelope::Exp.measure_integral(0.6).unwrap()
        + 4.0 * Envelope::Exp.measure_integral(0.35).unwrap();
    assert!((h.value - n.value).norm() <= h.estimated_error + n.estimated_error);
    assert!(
        (n.value.re - expected).abs() < 1e-8 * expected,
        "{} vs {expected}",
        n.value.re
    );
}

#[test]
fn translation_shifts_the_position_space_function() {
    let g = default_grid();
    let phi = polarized(Polarization::TPlus, Envelope::GaussIr)
        .plus(&polarized(Polarization::GaugeLow, Envelope::GaussIr));
    let a = [0.3, -0.2, 0.1, 0.25];
    let x = [0.4, 0.1, -0.3, 0.2];
    let shifted = [x[0] - a[0], x[1] - a[1], x[2] - a[2], x[3] - a[3]];
    let lhs = fourier_to_position(&translate(a, &phi), g, x).unwrap();
    let rhs = fourier_to_position(&phi, g, shifted).unwrap();
    for i in 0..4 {
        assert!(
            (lhs.value[i] - rhs.value[i]).norm()
                <= 1e-8 + lhs.estimated_error + rhs.estimated_error,
            "component {i}: {:?} vs {:?}",
            lhs.value[i],
            rhs.value[i]
        );
    }
    let transversal = fourier_to_position(
        &polarized(Polarization::TPlus, Envelope::ExpIr),
        g,
        [0.0; 4],
    )
    .unwrap();
    assert_eq!(transversal.value[0], Complex64::new(0.0, 0.0));
}

#[test]
fn single_transversal_mode_gives_trivial_eta() {
    let basis = build_mode_basis(
        &[polarized(Polarization::TPlus, Envelope::ExpIr)],
        light_grid(),
    )
    .unwrap();
    assert_eq!(basis.len(), 1);
    assert!((basis.j_matrix[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    let sector = FockSector::new(basis, 3).unwrap();
    let eta = gupta_bleuler_eta(&sector).unwrap();
    let dev = (&eta.matrix - sector.identity().matrix)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(dev < 1e-9, "{dev:e}");
}

#[test]
fn gauge_pair_has_exchanging_mode_symmetry() {
    // J' maps w_low·g to -w_high·g/r², so the partner carries the 1/r² factor
    let g = profile(Envelope::GaussIr, 1.0);
    let h = g.clone();
    let partner = ScalarFunction::new("g/r²", move |p| Ok(h.eval(p)? / (p.r() * p.r())));
    let states = [
        MomentumWaveFunction::polarized(Polarization::GaugeLow, g),
        MomentumWaveFunction::polarized(Polarization::GaugeHigh, partner),
    ];
    let basis = build_mode_basis(&states, light_grid()).unwrap();
    assert_eq!(basis.len(), 2);
    let j = &basis.j_matrix;
    assert!(j[(0, 0)].norm() < 1e-6 && j[(1, 1)].norm() < 1e-6, "{j}");
    assert!((j[(0, 1)].norm() - 1.0).abs() < 1e-6, "{j}");
    assert!(basis.involution_residual() < 1e-7);
}
