//! The Krein-isometric representation on momentum-space states:
//!
//! ```text
//! T(a) φ(p) = e^{i a·p} φ(p)
//! U(α) φ(p) = Λ(α⁻¹) φ(Λ(α)p)
//! ```
//!
//! together with its conjugate `(T, J'UJ')`. With the antihomomorphic spinor
//! map of [`crate::cone`], `U(α)U(β) = U(αβ)` and
//! `U(α) T(a) U(α)⁻¹ = T(Λ(α)⁻¹ a)`.

use crate::cone::{
    lorentz_act_point, minkowski_dot, spinor_to_lorentz, ConePoint, LorentzMatrix, Sl2c,
};
use crate::error::{Error, Result};
use crate::krein::{MAX_RADIUS, MIN_RADIUS};
use crate::wavefunction::{apply_j_prime, norm_c4, real_mat_vec, MomentumWaveFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RepKind {
    Translation([f64; 4]),
    Lorentz(Sl2c),
    ConjugateLorentz(Sl2c),
}

/// One representor, with `Λ(α)` and `Λ(α⁻¹)` cached for the Lorentz kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepElement {
    pub kind: RepKind,
    lambda: Option<(LorentzMatrix, LorentzMatrix)>,
}

impl RepElement {
    pub fn translation(a: [f64; 4]) -> Result<Self> {
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("translation vector must be finite".into()));
        }
        Ok(RepElement {
            kind: RepKind::Translation(a),
            lambda: None,
        })
    }

    pub fn lorentz(alpha: Sl2c) -> Result<Self> {
        Ok(RepElement {
            kind: RepKind::Lorentz(alpha),
            lambda: Some(lambdas(&alpha)?),
        })
    }

    pub fn conjugate_lorentz(alpha: Sl2c) -> Result<Self> {
        Ok(RepElement {
            kind: RepKind::ConjugateLorentz(alpha),
            lambda: Some(lambdas(&alpha)?),
        })
    }

    pub fn apply(&self, phi: &MomentumWaveFunction) -> MomentumWaveFunction {
        match (self.kind, self.lambda) {
            (RepKind::Translation(a), _) => translate(a, phi),
            (RepKind::Lorentz(_), Some((l, li))) => lorentz_pullback(l, li, phi, false),
            (RepKind::ConjugateLorentz(_), Some((l, li))) => lorentz_pullback(l, li, phi, true),
            _ => unreachable!("Lorentz representors always cache Λ"),
        }
    }
}

fn lambdas(alpha: &Sl2c) -> Result<(LorentzMatrix, LorentzMatrix)> {
    Ok((
        spinor_to_lorentz(alpha)?,
        spinor_to_lorentz(&alpha.inverse())?,
    ))
}

/// `T(a)`: pointwise phase `e^{i(a⁰r - a⃗·p⃗)}`.
pub fn translate(a: [f64; 4], phi: &MomentumWaveFunction) -> MomentumWaveFunction {
    phi.with_phase(&format!("a·p, a={a:?}"), move |p| {
        minkowski_dot(&a, &p.four())
    })
}

/// `U(α)`.
pub fn lorentz_act_rep(alpha: &Sl2c, phi: &MomentumWaveFunction) -> Result<MomentumWaveFunction> {
    let (l, li) = lambdas(alpha)?;
    Ok(lorentz_pullback(l, li, phi, false))
}

/// `J' U(α) J'`: `p ↦ J'(p) Λ(α⁻¹) J'(Λ(α)p) φ(Λ(α)p)`.
pub fn conjugate_lorentz_act(
    alpha: &Sl2c,
    phi: &MomentumWaveFunction,
) -> Result<MomentumWaveFunction> {
    let (l, li) = lambdas(alpha)?;
    Ok(lorentz_pullback(l, li, phi, true))
}

pub(crate) fn moved_point(lambda: &LorentzMatrix, p: &ConePoint) -> Result<ConePoint> {
    let q = lorentz_act_point(lambda, p)?;
    if !(MIN_RADIUS..=MAX_RADIUS).contains(&q.r()) {
        return Err(Error::Range { r: q.r() });
    }
    Ok(q)
}

fn lorentz_pullback(
    lambda: LorentzMatrix,
    lambda_inv: LorentzMatrix,
    phi: &MomentumWaveFunction,
    conjugate: bool,
) -> MomentumWaveFunction {
    let inner = phi.clone();
    let label = if conjugate { "J'UJ'" } else { "U" };
    MomentumWaveFunction::new(format!("{label}(α)·{}", phi.description()), move |p| {
        let q = moved_point(&lambda, p)?;
        let v = inner.eval(&q)?;
        if conjugate {
            if !(MIN_RADIUS..=MAX_RADIUS).contains(&p.r()) {
                return Err(Error::Range { r: p.r() });
            }
            let moved = real_mat_vec(&lambda_inv.0, &apply_j_prime(&q, &v));
            Ok(apply_j_prime(p, &moved))
        } else {
            Ok(real_mat_vec(&lambda_inv.0, &v))
        }
    })
}

/// `max_p |U(α)(U(β)φ)(p) - U(αβ)φ(p)|` over the sample points.
pub fn verify_representation_law(
    alpha: &Sl2c,
    beta: &Sl2c,
    phi: &MomentumWaveFunction,
    sample_points: &[ConePoint],
) -> Result<f64> {
    let sequential = lorentz_act_rep(alpha, &lorentz_act_rep(beta, phi)?)?;
    let composed = lorentz_act_rep(&(*alpha * *beta), phi)?;
    max_deviation(&sequential, &composed, sample_points)
}

pub fn max_deviation(
    a: &MomentumWaveFunction,
    b: &MomentumWaveFunction,
    sample_points: &[ConePoint],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in sample_points {
        worst = worst.max(norm_c4(&(a.eval(p)? - b.eval(p)?)));
    }
    Ok(worst)
}
