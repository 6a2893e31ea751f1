//! Fixtures shared by the benchmarks.

use krein_photon::wavefunction::{Envelope, Polarization, Profile, ScalarFunction};
use krein_photon::{build_grid, GridConfig, MomentumWaveFunction, QuadratureGrid};

/// The 8 x 32 grid used for bulk checks.
pub fn light_grid() -> QuadratureGrid {
    build_grid(GridConfig {
        angular_order: 8,
        radial_order: 32,
        ..GridConfig::default()
    })
    .expect("light grid builds")
}

/// A transversal plus gauge state with smooth profiles.
pub fn mixed_state() -> MomentumWaveFunction {
    let g = |env, s| ScalarFunction::from_profile(Profile::new(env, s));
    MomentumWaveFunction::polarized(Polarization::TPlus, g(Envelope::GaussIr, 1.0)).plus(
        &MomentumWaveFunction::polarized(Polarization::GaugeHigh, g(Envelope::ExpIr, 0.8)),
    )
}
