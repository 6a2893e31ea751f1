//! Seeded random draws of cone points, group elements and states for the
//! property checks. All draws come from a caller-owned `ChaCha8Rng`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cone::{ConePoint, Sl2c};
use crate::error::Result;
use crate::wavefunction::{Envelope, MomentumWaveFunction, Polarization, Profile, ScalarFunction};

/// Half-angle of the polar caps excluded when sampling off-axis points.
pub const POLAR_CAP: f64 = 1e-3;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let s = (1.0 - z * z).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

/// Radius log-uniform in `[r_min, r_max]`, direction uniform on the sphere.
pub fn cone_point_log_uniform(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> Result<ConePoint> {
    let r = (rng.random_range(r_min.ln()..=r_max.ln())).exp();
    let n = unit_vector(rng);
    ConePoint::new([r * n[0], r * n[1], r * n[2]])
}

/// Like [`cone_point_log_uniform`] but outside the polar caps of half-angle
/// [`POLAR_CAP`].
pub fn cone_point_off_axis(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> Result<ConePoint> {
    let zmax = POLAR_CAP.cos();
    loop {
        let p = cone_point_log_uniform(rng, r_min, r_max)?;
        if p.unit()[2].abs() < zmax {
            return Ok(p);
        }
    }
}

pub fn rotation(rng: &mut ChaCha8Rng) -> Result<Sl2c> {
    Sl2c::rotation(unit_vector(rng), rng.random_range(-PI..PI))
}

pub fn boost(rng: &mut ChaCha8Rng, max_rapidity: f64) -> Result<Sl2c> {
    Sl2c::boost(
        unit_vector(rng),
        rng.random_range(-max_rapidity..=max_rapidity),
    )
}

/// A boost composed with a rotation.
pub fn lorentz(rng: &mut ChaCha8Rng, max_rapidity: f64) -> Result<Sl2c> {
    Ok(boost(rng, max_rapidity)? * rotation(rng)?)
}

fn complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// A profile vanishing to all orders at the apex, with scale in `[0.6, 1.4]`.
pub fn smooth_profile(rng: &mut ChaCha8Rng) -> ScalarFunction {
    let envelopes = [Envelope::GaussIr, Envelope::Poly2GaussIr];
    let env = envelopes[rng.random_range(0..envelopes.len())];
    let scale = rng.random_range(0.6..1.4);
    let ang = [
        1.0,
        rng.random_range(-0.4..0.4),
        rng.random_range(-0.4..0.4),
        rng.random_range(-0.4..0.4),
    ];
    ScalarFunction::with_angular(Profile::new(env, scale), ang)
}

/// `Σ cₖ wₖ gₖ` over the given polarizations with random coefficients and
/// profiles.
pub fn state(rng: &mut ChaCha8Rng, polarizations: &[Polarization]) -> MomentumWaveFunction {
    let terms: Vec<(Complex64, MomentumWaveFunction)> = polarizations
        .iter()
        .map(|&pol| {
            (
                complex(rng),
                MomentumWaveFunction::polarized(pol, smooth_profile(rng)),
            )
        })
        .collect();
    MomentumWaveFunction::linear_combination(&terms)
}

/// Random mixture of all four polarizations.
pub fn mixed_state(rng: &mut ChaCha8Rng) -> MomentumWaveFunction {
    state(rng, &Polarization::ALL)
}

/// Random pair of scalar profiles with complex coefficients.
pub fn scalar_pair(rng: &mut ChaCha8Rng) -> (ScalarFunction, ScalarFunction) {
    let a = smooth_profile(rng).scaled(complex(rng));
    let b = smooth_profile(rng).scaled(complex(rng));
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_draws_repeat() {
        let (mut a, mut b) = (seeded(7), seeded(7));
        for _ in 0..10 {
            let (p, q) = (
                cone_point_log_uniform(&mut a, 1e-3, 1e3).unwrap(),
                cone_point_log_uniform(&mut b, 1e-3, 1e3).unwrap(),
            );
            assert_eq!(p, q);
        }
    }

    #[test]
    fn ranges_respected() {
        let mut rng = seeded(1);
        for _ in 0..200 {
            let p = cone_point_off_axis(&mut rng, 0.1, 10.0).unwrap();
            assert!(p.r() >= 0.1 * (1.0 - 1e-12) && p.r() <= 10.0 * (1.0 + 1e-12));
            assert!(p.unit()[2].abs() < POLAR_CAP.cos());
            let b = boost(&mut rng, 2.0).unwrap();
            assert!((b.det() - 1.0).norm() < 1e-12);
        }
    }
}
