//! The transversal subspace `H_tr = { w₁⁺f₊ + w₁⁻f₋ }` and the induced action
//! on pairs `(f₊, f₋)`.
//!
//! For a Lorentz transformation the induced action is
//!
//! ```text
//! (f₊, f₋)(p) ↦ M(α, p) (f₊, f₋)(Λ(α)p),   M_ij = w_i(p) · Λ(α⁻¹) w_j(Λ(α)p)
//! ```
//!
//! with `M` an exact 2×2 rotation by the Wigner angle `Θ(α, p)`. The vector
//! `Λ(α⁻¹) w_j(Λ(α)p)` is Minkowski-orthogonal to `p`, so whatever is left
//! after projection lies along `p` itself: a Krein-null vector orthogonal to
//! every transversal state.
//!
//! Orientation: `(w₁⁺, w₁⁻, p̂)` is a right-handed frame and rotations act
//! actively, so an active rotation by `ψ` about `p̂` gives
//! `M = [[cos ψ, sin ψ], [-sin ψ, cos ψ]]` and `Θ = ψ`.

use nalgebra::{Matrix2, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use crate::cone::{minkowski_dot, spinor_to_lorentz, ConePoint, LorentzMatrix, Sl2c};
use crate::error::{Error, Result};
use crate::krein::{eigensystem_unchecked, in_axis_zone};
use crate::quadrature::QuadratureGrid;
use crate::representation::{lorentz_act_rep, moved_point};
use crate::wavefunction::{two_grid, InnerProductReport, MomentumWaveFunction, ScalarFunction, C4};

/// A physical state as its two helicity-frame components.
#[derive(Debug, Clone)]
pub struct TransversalPair {
    pub f_plus: ScalarFunction,
    pub f_minus: ScalarFunction,
}

impl TransversalPair {
    pub fn new(f_plus: ScalarFunction, f_minus: ScalarFunction) -> Self {
        TransversalPair { f_plus, f_minus }
    }

    pub fn zero() -> Self {
        Self::new(ScalarFunction::zero(), ScalarFunction::zero())
    }

    pub fn eval(&self, p: &ConePoint) -> Result<[Complex64; 2]> {
        Ok([self.f_plus.eval(p)?, self.f_minus.eval(p)?])
    }
}

fn transversal_basis(p: &ConePoint) -> [Vector4<f64>; 2] {
    let e = eigensystem_unchecked(p);
    [e.w_plus(), e.w_minus()]
}

fn project_vector(p: &ConePoint, v: &C4) -> [Complex64; 2] {
    transversal_basis(p).map(|w| v[0] * w[0] + v[1] * w[1] + v[2] * w[2] + v[3] * w[3])
}

/// `w₁⁺ f₊ + w₁⁻ f₋`.
pub fn embed(pair: &TransversalPair) -> MomentumWaveFunction {
    let pair = pair.clone();
    let description = format!(
        "w+·{} + w-·{}",
        pair.f_plus.description(),
        pair.f_minus.description()
    );
    MomentumWaveFunction::new(description, move |p| {
        let [fp, fm] = pair.eval(p)?;
        let [wp, wm] = transversal_basis(p);
        Ok(C4::from_fn(|i, _| fp * wp[i] + fm * wm[i]))
    })
}

/// `f±(p) = w₁±(p) · φ(p)`.
pub fn project_tr(phi: &MomentumWaveFunction) -> TransversalPair {
    let (a, b) = (phi.clone(), phi.clone());
    TransversalPair::new(
        ScalarFunction::new(format!("w+·{}", phi.description()), move |p| {
            Ok(project_vector(p, &a.eval(p)?)[0])
        }),
        ScalarFunction::new(format!("w-·{}", phi.description()), move |p| {
            Ok(project_vector(p, &b.eval(p)?)[1])
        }),
    )
}

/// `project_tr(U(α) embed(pair))`.
pub fn induced_act(alpha: &Sl2c, pair: &TransversalPair) -> Result<TransversalPair> {
    Ok(project_tr(&lorentz_act_rep(alpha, &embed(pair))?))
}

/// The same action through the rotation block, `M(α, p) f(Λ(α)p)`.
pub fn induced_act_direct(alpha: &Sl2c, pair: &TransversalPair) -> Result<TransversalPair> {
    let lambda = spinor_to_lorentz(alpha)?;
    let lambda_inv = spinor_to_lorentz(&alpha.inverse())?;
    let component = |k: usize| {
        let pair = pair.clone();
        ScalarFunction::new(format!("M·f[{k}]"), move |p| {
            let (m, q) = rotation_block(&lambda, &lambda_inv, p)?;
            let f = pair.eval(&q)?;
            Ok(f[0] * m[(k, 0)] + f[1] * m[(k, 1)])
        })
    };
    Ok(TransversalPair::new(component(0), component(1)))
}

/// Translations act by the scalar phase `e^{i a·p}` on both components.
pub fn induced_translate(a: [f64; 4], pair: &TransversalPair) -> TransversalPair {
    let phase = |f: &ScalarFunction| {
        let f = f.clone();
        ScalarFunction::new(format!("e^(i a·p)·{}", f.description()), move |p| {
            let (s, c) = minkowski_dot(&a, &p.four()).sin_cos();
            Ok(f.eval(p)? * Complex64::new(c, s))
        })
    };
    TransversalPair::new(phase(&pair.f_plus), phase(&pair.f_minus))
}

/// `∫ (|f₊|² + |f₋|²) dμ` with a two-grid error estimate.
pub fn transversal_norm(
    pair: &TransversalPair,
    grid: &QuadratureGrid,
) -> Result<InnerProductReport> {
    two_grid(grid, |p| {
        let [a, b] = pair.eval(p)?;
        let v = a.norm_sqr() + b.norm_sqr();
        Ok((v.into(), v))
    })
}

/// `M(α, p)` and the moved point `Λ(α)p`.
fn rotation_block(
    lambda: &LorentzMatrix,
    lambda_inv: &LorentzMatrix,
    p: &ConePoint,
) -> Result<(Matrix2<f64>, ConePoint)> {
    let q = moved_point(lambda, p)?;
    let wp = transversal_basis(p);
    let wq = transversal_basis(&q);
    let moved = wq.map(|w| lambda_inv.0 * w);
    Ok((Matrix2::from_fn(|i, j| wp[i].dot(&moved[j])), q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaSample {
    #[serde(skip)]
    pub alpha: Sl2c,
    pub p: ConePoint,
    /// Wigner angle in `(-π, π]`.
    pub theta: f64,
    /// `‖MᵀM - I‖∞`.
    pub residual: f64,
}

/// The rotation block at `p` and its angle.
pub fn extract_theta(alpha: &Sl2c, p: &ConePoint) -> Result<ThetaSample> {
    let (m, _) = theta_block(alpha, p)?;
    Ok(ThetaSample {
        alpha: *alpha,
        p: *p,
        theta: m[(0, 1)].atan2(m[(0, 0)]),
        residual: (m.transpose() * m - Matrix2::identity()).abs().max(),
    })
}

fn theta_block(alpha: &Sl2c, p: &ConePoint) -> Result<(Matrix2<f64>, ConePoint)> {
    let lambda = spinor_to_lorentz(alpha)?;
    let lambda_inv = spinor_to_lorentz(&alpha.inverse())?;
    if in_axis_zone(p) {
        return Err(Error::AxisZone);
    }
    let (m, q) = rotation_block(&lambda, &lambda_inv, p)?;
    if in_axis_zone(&q) {
        return Err(Error::AxisZone);
    }
    Ok((m, q))
}

/// `U(α) embed(pair) - embed(induced_act(α, pair))`.
pub fn unphysical_remainder(alpha: &Sl2c, pair: &TransversalPair) -> Result<MomentumWaveFunction> {
    let moved = lorentz_act_rep(alpha, &embed(pair))?;
    Ok(moved.minus(&embed(&induced_act(alpha, pair)?)))
}

/// Eigenvalues of the rotation block for a rotation by `ψ` about `p̂`,
/// ordered by decreasing imaginary part.
pub fn helicity_eigencheck(psi: f64, p: &ConePoint) -> Result<[Complex64; 2]> {
    let alpha = Sl2c::rotation(p.unit(), psi)?;
    let (m, _) = theta_block(&alpha, p)?;
    // λ = (a+d)/2 ± √(((a-d)/2)² + bc), free of the cancellation in tr²/4 - det
    let half_trace = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let half_diff = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let disc = Complex64::new(half_diff * half_diff + m[(0, 1)] * m[(1, 0)], 0.0).sqrt();
    let mut ev = [half_trace + disc, half_trace - disc];
    if ev[0].im < ev[1].im {
        ev.swap(0, 1);
    }
    Ok(ev)
}

/// `max |pᵘ φ_μ(p)|` over the grid nodes for the embedded pair.
pub fn lorentz_condition_residual(pair: &TransversalPair, grid: &QuadratureGrid) -> Result<f64> {
    let phi = embed(pair);
    let mut worst = 0.0f64;
    for p in grid.nodes() {
        let v = phi.eval(p)?;
        let k = p.four();
        let contraction = v[0] * k[0] - v[1] * k[1] - v[2] * k[2] - v[3] * k[3];
        worst = worst.max(contraction.norm());
    }
    Ok(worst)
}

/// `max |f(p) - g(p)|` over both components at the sample points.
pub fn pair_deviation(
    a: &TransversalPair,
    b: &TransversalPair,
    points: &[ConePoint],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in points {
        let (x, y) = (a.eval(p)?, b.eval(p)?);
        worst = worst.max((x[0] - y[0]).norm()).max((x[1] - y[1]).norm());
    }
    Ok(worst)
}
